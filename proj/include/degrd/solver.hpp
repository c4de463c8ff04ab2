#pragma once

// Strang splitting for a + b <-> c with Neumann diffusion: half diffusion,
// exact pointwise reaction, half diffusion.

#include <cstddef>
#include <span>
#include <vector>

#include "degrd/functionals.hpp"
#include "degrd/grid.hpp"
#include "degrd/model.hpp"

namespace degrd {

enum class DiffusionScheme {
  /// exp(tau d L) applied through per-axis cosine eigen-decompositions.
  exact,
  /// (I - tau d L) v = u solved by conjugate gradients.
  backward_euler,
};

struct SolverConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  int record_every = 100;
  double linsolve_tol = 1e-12;
  int linsolve_max_iter = 10000;
  DiffusionScheme scheme = DiffusionScheme::exact;
  /// Keep a copy of the fields at every recorded time (tests, oracle runs).
  bool keep_snapshots = false;

  /// Throws InvalidArgument on a malformed configuration.
  void validate() const;
  /// Number of steps; t_end must be an integer multiple of dt.
  std::size_t steps() const;
};

struct SolverStats {
  std::size_t steps = 0;
  std::size_t samples = 0;
  std::size_t linear_solves = 0;
  std::size_t linear_iterations = 0;
  int max_linear_iterations = 0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<FunctionalSample> samples;
  SpeciesFields final_fields;
  std::vector<SpeciesFields> snapshots;  // filled only with keep_snapshots
  EquilibriumState equilibrium;
  SolverStats stats;
};

/// One backward-Euler diffusion step. Returns u unchanged when d = 0;
/// throws LinSolveFailure if CG does not reach cfg.linsolve_tol.
std::vector<double> diffusion_substep(std::span<const double> u, double d, double dt, const Grid& grid,
                                      const SolverConfig& cfg, SolverStats* stats = nullptr);

/// The semigroup exp(tau d L) for the Neumann Laplacian on a grid. Each
/// axis factor is a dense symmetric matrix with nonnegative entries and unit
/// row sums, so the map is positive and conservative.
class HeatPropagator {
 public:
  HeatPropagator(const Grid& grid, double d, double tau);

  std::vector<double> apply(std::span<const double> u) const;
  void apply_in_place(std::vector<double>& u) const;

 private:
  const Grid* grid_;
  bool identity_ = false;
  std::vector<std::vector<double>> axis_matrices_;
};

/// Exact integration of the reaction over dt in every cell.
SpeciesFields reaction_substep(const SpeciesFields& fields, double dt);

/// Precomputes the diffusion operators for one (params, grid, dt) triple.
class StrangStepper {
 public:
  StrangStepper(const ModelParams& params, const Grid& grid, const SolverConfig& cfg);

  SpeciesFields step(const SpeciesFields& fields);
  /// Half diffusion step only (one species set).
  void half_diffusion(SpeciesFields& fields);
  /// Two consecutive half steps merged; exact scheme only.
  void full_diffusion(SpeciesFields& fields);
  bool can_fuse() const noexcept { return cfg_.scheme == DiffusionScheme::exact; }
  const SolverStats& stats() const noexcept { return stats_; }

 private:
  void diffuse(SpeciesFields& fields, bool full);

  ModelParams params_;
  const Grid* grid_;
  SolverConfig cfg_;
  SolverStats stats_;
  std::vector<HeatPropagator> half_;  // a, b, c
  std::vector<HeatPropagator> full_;
};

SpeciesFields strang_step(const SpeciesFields& fields, const ModelParams& params, double dt, const Grid& grid,
                          const SolverConfig& cfg);

Trajectory run(const SpeciesFields& initial, const ModelParams& params, const Grid& grid,
               const DomainSpec& domain, const SolverConfig& cfg);

}  // namespace degrd
