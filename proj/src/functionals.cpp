#include "degrd/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "degrd/error.hpp"

namespace degrd {

namespace {

// v * phi(u / v) with phi(x) = x ln x - x + 1, evaluated through
// y = (u - v) / v so that the value keeps its relative accuracy when u ~ v.
double relative_density(double u, double v) {
  const double y = (u - v) / v;
  if (std::abs(y) < 1e-3) {
    const double y2 = y * y;
    return v * y2 * (0.5 + y * (-1.0 / 6.0 + y * (1.0 / 12.0 - y / 20.0)));
  }
  return v * ((1.0 + y) * std::log1p(y) - y);
}

std::vector<double> sqrt_of(const std::vector<double>& u) {
  std::vector<double> out(u.size());
  std::transform(u.begin(), u.end(), out.begin(), [](double v) { return std::sqrt(v); });
  return out;
}

double l1_distance(const std::vector<double>& u, double target, const Grid& grid) {
  double sum = 0.0;
  for (double v : u) sum += std::abs(v - target);
  return grid.cell_volume() * sum;
}

double abc_defect(const SpeciesFields& f, const Grid& grid) {
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    // sqrt(ab) - sqrt(c) without cancellation.
    const double num = std::fma(f.a[i], f.b[i], -f.c[i]);
    const double d = num / (std::sqrt(f.a[i] * f.b[i]) + std::sqrt(f.c[i]));
    sum += d * d;
  }
  return grid.cell_volume() * sum;
}

void check_grid(const SpeciesFields& fields, const Grid& grid) {
  if (fields.size() != grid.size()) throw Error(ErrorCode::invalid_field, "field size does not match grid");
}

void check_equilibrium(const EquilibriumState& eq) {
  if (!(eq.a_inf > 0.0) || !(eq.b_inf > 0.0) || !(eq.c_inf > 0.0)) {
    throw Error(ErrorCode::degenerate_equilibrium, "equilibrium components must be strictly positive");
  }
}

}  // namespace

double ckp_kappa() noexcept {
  return (3.0 + 2.0 * std::numbers::sqrt2) / (9.0 + 2.0 * std::numbers::sqrt2);
}

double entropy(const SpeciesFields& fields, const Grid& grid) {
  check_positive(fields);
  check_grid(fields, grid);
  double sum = 0.0;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    sum += relative_density(fields.a[i], 1.0) + relative_density(fields.b[i], 1.0) +
           relative_density(fields.c[i], 1.0);
  }
  return grid.cell_volume() * sum;
}

double relative_entropy(const SpeciesFields& fields, const EquilibriumState& eq, const Grid& grid) {
  check_equilibrium(eq);
  check_positive(fields);
  check_grid(fields, grid);
  double sum = 0.0;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    sum += relative_density(fields.a[i], eq.a_inf) + relative_density(fields.b[i], eq.b_inf) +
           relative_density(fields.c[i], eq.c_inf);
  }
  return grid.cell_volume() * sum;
}

namespace fault {

namespace {
bool flip_reaction = false;
}

void set_flip_reaction_sign(bool on) noexcept { flip_reaction = on; }
bool flip_reaction_sign() noexcept { return flip_reaction; }

}  // namespace fault

double reaction_dissipation_density(double a, double b, double c) noexcept {
  const double ab = a * b;
  const double diff = std::fma(a, b, -c);
  if (std::abs(diff) < 1e-15 * std::max(ab, c)) return 0.0;
  return diff * std::log1p(diff / c);
}

double dissipation(const SpeciesFields& fields, const ModelParams& params, const Grid& grid) {
  check_positive(fields);
  check_grid(fields, grid);
  double gradient = 0.0;
  if (params.d_a > 0.0) gradient += 4.0 * params.d_a * sqrt_gradient_energy(fields.a, grid);
  if (params.d_b > 0.0) gradient += 4.0 * params.d_b * sqrt_gradient_energy(fields.b, grid);
  if (params.d_c > 0.0) gradient += 4.0 * params.d_c * sqrt_gradient_energy(fields.c, grid);
  double reaction = 0.0;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    reaction += reaction_dissipation_density(fields.a[i], fields.b[i], fields.c[i]);
  }
  if (fault::flip_reaction_sign()) reaction = -reaction;
  return gradient + grid.cell_volume() * reaction;
}

double ckp_lower_bound(const SpeciesFields& fields, const EquilibriumState& eq, const Grid& grid) {
  if (!(eq.M1 > 0.0) || !(eq.M2 > 0.0)) throw Error(ErrorCode::invalid_mass, "CKP bound needs positive masses");
  check_finite(fields);
  check_grid(fields, grid);
  const double la = l1_distance(fields.a, eq.a_inf, grid);
  const double lb = l1_distance(fields.b, eq.b_inf, grid);
  const double lc = l1_distance(fields.c, eq.c_inf, grid);
  const double volume = grid.volume();
  return ckp_kappa() * volume *
         (la * la / (2.0 * eq.M1) + lb * lb / (2.0 * eq.M2) + lc * lc / (eq.M1 + eq.M2));
}

DissipationBound dissipation_deviation_bound(const SpeciesFields& fields, const ModelParams& params,
                                             const DomainSpec& domain, const Grid& grid) {
  return dissipation_deviation_bound(fields, params, domain.poincare_constant, grid);
}

DissipationBound dissipation_deviation_bound(const SpeciesFields& fields, const ModelParams& params,
                                             double poincare_constant, const Grid& grid) {
  DissipationBound bound;
  bound.lhs = dissipation(fields, params, grid);
  const auto add = [&](double d, const std::vector<double>& u) {
    if (d <= 0.0) return;
    const double dev = deviation_l2(sqrt_of(u), grid);
    bound.rhs += 4.0 * d / poincare_constant * dev * dev;
  };
  add(params.d_a, fields.a);
  add(params.d_b, fields.b);
  add(params.d_c, fields.c);
  bound.rhs += 4.0 * abc_defect(fields, grid);
  return bound;
}

FunctionalSample sample(const SpeciesFields& fields, double t, const EquilibriumState& eq,
                        const ModelParams& params, const DomainSpec& domain, const Grid& grid,
                        RunningIntegrals& running) {
  FunctionalSample s;
  s.t = t;
  s.E = entropy(fields, grid);
  s.E_rel = relative_entropy(fields, eq, grid);
  s.D = dissipation(fields, params, grid);
  const Masses masses = conserved_masses(fields, domain);
  s.M1 = masses.M1;
  s.M2 = masses.M2;

  const double dev_a = deviation_l2(sqrt_of(fields.a), grid);
  const double dev_b = deviation_l2(sqrt_of(fields.b), grid);
  const double dev_c = deviation_l2(sqrt_of(fields.c), grid);
  s.dev_A2 = dev_a * dev_a;
  s.dev_B2 = dev_b * dev_b;
  s.dev_C2 = dev_c * dev_c;
  s.abc_defect = abc_defect(fields, grid);

  s.l1_dist_a = l1_distance(fields.a, eq.a_inf, grid);
  s.l1_dist_b = l1_distance(fields.b, eq.b_inf, grid);
  s.l1_dist_c = l1_distance(fields.c, eq.c_inf, grid);
  s.ckp_lhs = ckp_lower_bound(fields, eq, grid);

  // N/2 drops below 1 in one dimension; the diagnostic then uses L1.
  const double half_dim = std::max(1.0, 0.5 * grid.dimension());
  s.diag_norms[diag::b_l32] = lp_norm(fields.b, 1.5, grid);
  s.diag_norms[diag::a_l32] = lp_norm(fields.a, 1.5, grid);
  s.diag_norms[diag::b_lN2] = lp_norm(fields.b, half_dim, grid);
  s.diag_norms[diag::c_l3] = lp_norm(fields.c, 3.0, grid);

  double f_a = 0.0;
  double f_b = 0.0;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    f_a += fields.a[i] * (fields.a[i] + fields.c[i]);
    f_b += fields.b[i] * (fields.b[i] + fields.c[i]);
  }
  f_a *= grid.cell_volume();
  f_b *= grid.cell_volume();
  if (running.started) {
    const double dt = t - running.t_last;
    running.int_a += 0.5 * dt * (f_a + running.f_a_last);
    running.int_b += 0.5 * dt * (f_b + running.f_b_last);
  }
  running.started = true;
  running.t_last = t;
  running.f_a_last = f_a;
  running.f_b_last = f_b;
  s.diag_norms[diag::int_a2ac] = running.int_a;
  s.diag_norms[diag::int_b2bc] = running.int_b;
  return s;
}

}  // namespace degrd
