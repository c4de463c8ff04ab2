#pragma once

// Domain types and the algebra of the reversible reaction a + b <-> c:
// conserved masses, the homogeneous equilibrium and the Gamma ratio that
// links relative entropy to square-root distances.

#include <cstddef>
#include <string_view>
#include <vector>

namespace degrd {

/// Axis-aligned box [0, L_1] x ... x [0, L_N] with N in {1, 2, 3}.
struct DomainSpec {
  int dimension = 1;
  std::vector<double> lengths;
  double volume = 0.0;
  /// Neumann Poincare-Wirtinger constant for the L2 deviation norm,
  /// (L_max / pi)^2.
  double poincare_constant = 0.0;

  static DomainSpec box(std::vector<double> lengths);
};

/// Which diffusivity (if any) vanishes.
enum class DiffusionMode { full, db0, dc0 };

std::string_view to_string(DiffusionMode mode) noexcept;
DiffusionMode parse_mode(std::string_view text);

struct ModelParams {
  double d_a = 1.0;
  double d_b = 1.0;
  double d_c = 1.0;

  /// Throws InvalidArgument unless d_a > 0 and at most one of d_b, d_c is 0.
  void validate() const;
  DiffusionMode mode() const;
};

/// Cell-averaged concentrations, one entry per grid cell in row-major order.
struct SpeciesFields {
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> c;

  std::size_t size() const noexcept { return a.size(); }

  static SpeciesFields uniform(std::size_t cells, double a, double b, double c);
};

/// InvalidField on size mismatch or any non-finite entry.
void check_finite(const SpeciesFields& fields);
/// check_finite plus NotPositive on any entry <= 0.
void check_positive(const SpeciesFields& fields);

struct Masses {
  double M1 = 0.0;  // average of a + c
  double M2 = 0.0;  // average of b + c
};

struct EquilibriumState {
  double a_inf = 0.0;
  double b_inf = 0.0;
  double c_inf = 0.0;
  double M1 = 0.0;
  double M2 = 0.0;
};

Masses conserved_masses(const SpeciesFields& fields, const DomainSpec& domain);

/// Roots r1 < r2 of c^2 - (1 + m1 + m2) c + m1 m2; r1 is the admissible
/// equilibrium value of c, and 0 <= r1 <= min(m1, m2) < r2.
struct RiccatiRoots {
  double r1 = 0.0;
  double r2 = 0.0;
};

RiccatiRoots riccati_roots(double m1, double m2);

EquilibriumState equilibrium_state(double M1, double M2);

/// (x ln(x/y) - x + y) / (sqrt(x) - sqrt(y))^2, equal to 2 on the diagonal
/// and extended by continuity to x = 0.
double gamma_ratio(double x, double y);

}  // namespace degrd
