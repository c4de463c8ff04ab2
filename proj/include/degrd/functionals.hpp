#pragma once

// Entropy, relative entropy, dissipation and the inequality checks built on
// them, evaluated on a single field snapshot.

#include <map>
#include <string>

#include "degrd/grid.hpp"
#include "degrd/model.hpp"

namespace degrd {

/// Diagnostic labels; these double as timeseries column names.
namespace diag {
inline constexpr const char* b_l32 = "b_l32";
inline constexpr const char* a_l32 = "a_l32";
inline constexpr const char* b_lN2 = "b_lN2";
inline constexpr const char* c_l3 = "c_l3";
inline constexpr const char* int_a2ac = "int_a2ac";
inline constexpr const char* int_b2bc = "int_b2bc";
}  // namespace diag

struct FunctionalSample {
  double t = 0.0;
  double E = 0.0;
  double E_rel = 0.0;
  double D = 0.0;
  double M1 = 0.0;
  double M2 = 0.0;
  double dev_A2 = 0.0;  // ||sqrt(a) - mean(sqrt(a))||^2
  double dev_B2 = 0.0;
  double dev_C2 = 0.0;
  double abc_defect = 0.0;  // ||sqrt(ab) - sqrt(c)||^2
  double l1_dist_a = 0.0;
  double l1_dist_b = 0.0;
  double l1_dist_c = 0.0;
  double ckp_lhs = 0.0;
  std::map<std::string, double> diag_norms;
};

/// State for the trapezoid accumulation of int_0^t int (a^2 + ac) and
/// int_0^t int (b^2 + bc) across successive sample() calls.
struct RunningIntegrals {
  bool started = false;
  double t_last = 0.0;
  double f_a_last = 0.0;
  double f_b_last = 0.0;
  double int_a = 0.0;
  double int_b = 0.0;
};

/// (3 + 2 sqrt 2) / (9 + 2 sqrt 2).
double ckp_kappa() noexcept;

double entropy(const SpeciesFields& fields, const Grid& grid);

double relative_entropy(const SpeciesFields& fields, const EquilibriumState& eq, const Grid& grid);

/// Pointwise (ab - c) ln(ab / c), zero when |ab - c| < 1e-15 max(ab, c).
double reaction_dissipation_density(double a, double b, double c) noexcept;

double dissipation(const SpeciesFields& fields, const ModelParams& params, const Grid& grid);

double ckp_lower_bound(const SpeciesFields& fields, const EquilibriumState& eq, const Grid& grid);

struct DissipationBound {
  double lhs = 0.0;  // D
  double rhs = 0.0;  // sum over diffusing species of 4 d/P ||delta||^2 + 4 ||AB - C||^2
};

/// The bound uses the Poincare constant carried by the domain.
DissipationBound dissipation_deviation_bound(const SpeciesFields& fields, const ModelParams& params,
                                             const DomainSpec& domain, const Grid& grid);

/// Same bound with an explicit Poincare constant.
DissipationBound dissipation_deviation_bound(const SpeciesFields& fields, const ModelParams& params,
                                             double poincare_constant, const Grid& grid);

/// Mutation hook for the verify command: while set, the reaction term of
/// dissipation() enters with the wrong sign.
namespace fault {
void set_flip_reaction_sign(bool on) noexcept;
bool flip_reaction_sign() noexcept;
}  // namespace fault

FunctionalSample sample(const SpeciesFields& fields, double t, const EquilibriumState& eq,
                        const ModelParams& params, const DomainSpec& domain, const Grid& grid,
                        RunningIntegrals& running);

}  // namespace degrd
