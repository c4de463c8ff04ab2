#pragma once

// Plain "key = value" run configuration.
//
//   dim, cells, lengths, d_a, d_b, d_c, init, dt, t_end, record_every,
//   linsolve_tol, out_dir, seed
//
// cells and lengths take one value per axis (a single value is broadcast).
// init is one of
//   uniform <a> <b> <c>
//   cosine_bump <amp>
//   random_positive <floor> <amp>
// Blank lines and lines starting with '#' are ignored.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "degrd/grid.hpp"
#include "degrd/model.hpp"
#include "degrd/solver.hpp"

namespace degrd {

struct InitSpec {
  std::string preset;
  std::vector<double> params;

  bool operator==(const InitSpec&) const = default;
};

struct RunConfig {
  int dim = 1;
  std::vector<int> cells;
  std::vector<double> lengths;
  double d_a = 1.0;
  double d_b = 1.0;
  double d_c = 1.0;
  InitSpec init;
  double dt = 1e-3;
  double t_end = 1.0;
  int record_every = 100;
  double linsolve_tol = 1e-12;
  std::string out_dir = "out";
  std::uint64_t seed = 0;

  bool operator==(const RunConfig&) const = default;

  ModelParams params() const { return {d_a, d_b, d_c}; }
  DomainSpec domain() const { return DomainSpec::box(lengths); }
  SolverConfig solver() const;
};

/// Throws ConfigError (with the offending line number where there is one).
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

/// Builds the initial fields described by config.init on the grid.
SpeciesFields initial_fields(const RunConfig& config, const Grid& grid);

/// Shortest decimal text that round-trips a double ("%.17g").
std::string format_double(double value);

}  // namespace degrd
