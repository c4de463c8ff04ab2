#include "degrd/oracle.hpp"

#include <cmath>
#include <vector>

#include "degrd/error.hpp"

namespace degrd::oracle {

namespace {

struct Rate {
  double da, db, dc;
};

Rate rate(double a, double b, double c) {
  const double r = c - a * b;
  return {r, r, -r};
}

}  // namespace

OdeState homogeneous_ode(double a0, double b0, double c0, double t_end, int substeps) {
  if (!(a0 > 0.0) || !(b0 > 0.0) || !(c0 > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "oracle needs a positive initial state");
  }
  if (substeps < 1 || !(t_end >= 0.0)) throw Error(ErrorCode::invalid_argument, "bad oracle horizon");
  const double h = t_end / substeps;
  double a = a0, b = b0, c = c0;
  for (int n = 0; n < substeps; ++n) {
    const Rate k1 = rate(a, b, c);
    const Rate k2 = rate(a + 0.5 * h * k1.da, b + 0.5 * h * k1.db, c + 0.5 * h * k1.dc);
    const Rate k3 = rate(a + 0.5 * h * k2.da, b + 0.5 * h * k2.db, c + 0.5 * h * k2.dc);
    const Rate k4 = rate(a + h * k3.da, b + h * k3.db, c + h * k3.dc);
    a += h / 6.0 * (k1.da + 2.0 * k2.da + 2.0 * k3.da + k4.da);
    b += h / 6.0 * (k1.db + 2.0 * k2.db + 2.0 * k3.db + k4.db);
    c += h / 6.0 * (k1.dc + 2.0 * k2.dc + 2.0 * k3.dc + k4.dc);
    if (a < -1e-12 || b < -1e-12 || c < -1e-12 || !std::isfinite(a + b + c)) {
      throw Error(ErrorCode::step_too_large, "RK4 left the positive orthant; use more substeps");
    }
  }
  return {a, b, c, t_end};
}

OdeState riccati_closed_form(double a0, double b0, double c0, double t) {
  const double m1 = a0 + c0;
  const double m2 = b0 + c0;
  const double s = 1.0 + m1 + m2;
  const double root = std::sqrt(s * s - 4.0 * m1 * m2);
  const double r1 = 0.5 * (s - root);
  const double r2 = 0.5 * (s + root);
  if (c0 == r1) return {a0, b0, c0, t};
  const double u = (c0 - r1) / (c0 - r2) * std::exp((r1 - r2) * t);
  const double c = (r1 - r2 * u) / (1.0 - u);
  return {m1 - c, m2 - c, c, t};
}

namespace {

struct Index3 {
  int n[3] = {1, 1, 1};
  double h[3] = {1.0, 1.0, 1.0};

  std::size_t flat(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n[1] + j) * n[2] + k;
  }
};

Index3 layout(const Grid& grid) {
  Index3 idx;
  for (int axis = 0; axis < grid.dimension(); ++axis) {
    idx.n[axis] = grid.cells(axis);
    idx.h[axis] = grid.spacing(axis);
  }
  return idx;
}

// sum over interior faces of (cell volume / h^2) (sqrt(u_R) - sqrt(u_L))^2
double naive_sqrt_energy(const std::vector<double>& u, const Index3& g, double cell_volume) {
  double total = 0.0;
  for (int i = 0; i < g.n[0]; ++i) {
    for (int j = 0; j < g.n[1]; ++j) {
      for (int k = 0; k < g.n[2]; ++k) {
        const double here = std::sqrt(u[g.flat(i, j, k)]);
        if (i + 1 < g.n[0]) {
          const double d = std::sqrt(u[g.flat(i + 1, j, k)]) - here;
          total += cell_volume * d * d / (g.h[0] * g.h[0]);
        }
        if (j + 1 < g.n[1]) {
          const double d = std::sqrt(u[g.flat(i, j + 1, k)]) - here;
          total += cell_volume * d * d / (g.h[1] * g.h[1]);
        }
        if (k + 1 < g.n[2]) {
          const double d = std::sqrt(u[g.flat(i, j, k + 1)]) - here;
          total += cell_volume * d * d / (g.h[2] * g.h[2]);
        }
      }
    }
  }
  return total;
}

double naive_sqrt_deviation2(const std::vector<double>& u, double cell_volume, double volume) {
  double mean = 0.0;
  for (double v : u) mean += std::sqrt(v) * cell_volume;
  mean /= volume;
  double total = 0.0;
  for (double v : u) total += (std::sqrt(v) - mean) * (std::sqrt(v) - mean) * cell_volume;
  return total;
}

double naive_norm(const std::vector<double>& u, double p, double cell_volume) {
  double total = 0.0;
  for (double v : u) total += std::pow(std::abs(v), p) * cell_volume;
  return std::pow(total, 1.0 / p);
}

}  // namespace

FunctionalSample brute_force_sample(const SpeciesFields& fields, const EquilibriumState& eq,
                                    const ModelParams& params, const DomainSpec& domain, const Grid& grid) {
  check_positive(fields);
  if (!(eq.a_inf > 0.0) || !(eq.b_inf > 0.0) || !(eq.c_inf > 0.0)) {
    throw Error(ErrorCode::degenerate_equilibrium, "equilibrium components must be strictly positive");
  }
  const Index3 g = layout(grid);
  double cell_volume = domain.volume;
  for (int axis = 0; axis < grid.dimension(); ++axis) cell_volume /= g.n[axis];

  FunctionalSample s;
  const std::vector<double>& a = fields.a;
  const std::vector<double>& b = fields.b;
  const std::vector<double>& c = fields.c;
  const double eq_values[3] = {eq.a_inf, eq.b_inf, eq.c_inf};
  const std::vector<double>* species[3] = {&a, &b, &c};

  double mass1 = 0.0, mass2 = 0.0, reaction = 0.0, defect = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (int sp = 0; sp < 3; ++sp) {
      const double u = (*species[sp])[i];
      s.E += (u * std::log(u) - u + 1.0) * cell_volume;
      s.E_rel += (u * std::log(u / eq_values[sp]) - u + eq_values[sp]) * cell_volume;
    }
    mass1 += (a[i] + c[i]) * cell_volume;
    mass2 += (b[i] + c[i]) * cell_volume;
    reaction += (a[i] * b[i] - c[i]) * (std::log(a[i]) + std::log(b[i]) - std::log(c[i])) * cell_volume;
    const double gap = std::sqrt(a[i]) * std::sqrt(b[i]) - std::sqrt(c[i]);
    defect += gap * gap * cell_volume;
    s.l1_dist_a += std::abs(a[i] - eq.a_inf) * cell_volume;
    s.l1_dist_b += std::abs(b[i] - eq.b_inf) * cell_volume;
    s.l1_dist_c += std::abs(c[i] - eq.c_inf) * cell_volume;
  }
  s.M1 = mass1 / domain.volume;
  s.M2 = mass2 / domain.volume;
  s.D = 4.0 * params.d_a * naive_sqrt_energy(a, g, cell_volume) +
        4.0 * params.d_b * naive_sqrt_energy(b, g, cell_volume) +
        4.0 * params.d_c * naive_sqrt_energy(c, g, cell_volume) + reaction;
  s.dev_A2 = naive_sqrt_deviation2(a, cell_volume, domain.volume);
  s.dev_B2 = naive_sqrt_deviation2(b, cell_volume, domain.volume);
  s.dev_C2 = naive_sqrt_deviation2(c, cell_volume, domain.volume);
  s.abc_defect = defect;

  const double kappa = (3.0 + 2.0 * std::sqrt(2.0)) / (9.0 + 2.0 * std::sqrt(2.0));
  s.ckp_lhs = kappa * domain.volume *
              (s.l1_dist_a * s.l1_dist_a / (2.0 * eq.M1) + s.l1_dist_b * s.l1_dist_b / (2.0 * eq.M2) +
               s.l1_dist_c * s.l1_dist_c / (eq.M1 + eq.M2));

  const double half_dim = domain.dimension < 2 ? 1.0 : domain.dimension / 2.0;
  s.diag_norms[diag::b_l32] = naive_norm(b, 1.5, cell_volume);
  s.diag_norms[diag::a_l32] = naive_norm(a, 1.5, cell_volume);
  s.diag_norms[diag::b_lN2] = naive_norm(b, half_dim, cell_volume);
  s.diag_norms[diag::c_l3] = naive_norm(c, 3.0, cell_volume);
  s.diag_norms[diag::int_a2ac] = 0.0;
  s.diag_norms[diag::int_b2bc] = 0.0;
  return s;
}

}  // namespace degrd::oracle
