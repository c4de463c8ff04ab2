#include "degrd/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "degrd/error.hpp"

namespace degrd {

void SolverConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::invalid_argument, "dt must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw Error(ErrorCode::invalid_argument, "t_end must be positive");
  if (!(dt < t_end)) throw Error(ErrorCode::invalid_argument, "dt must be smaller than t_end");
  if (record_every < 1) throw Error(ErrorCode::invalid_argument, "record_every must be positive");
  if (!(linsolve_tol > 0.0) || !(linsolve_tol < 1e-6)) {
    throw Error(ErrorCode::invalid_argument, "linsolve_tol must lie in (0, 1e-6)");
  }
  if (linsolve_max_iter < 1) throw Error(ErrorCode::invalid_argument, "linsolve_max_iter must be positive");
  steps();
}

std::size_t SolverConfig::steps() const {
  const double ratio = t_end / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * ratio) {
    throw Error(ErrorCode::invalid_argument, "t_end must be an integer multiple of dt");
  }
  return static_cast<std::size_t>(rounded);
}

std::vector<double> diffusion_substep(std::span<const double> u, double d, double dt, const Grid& grid,
                                      const SolverConfig& cfg, SolverStats* stats) {
  std::vector<double> x(u.begin(), u.end());
  if (d == 0.0) return x;
  const double tau = d * dt;
  const auto apply = [&](const std::vector<double>& v) {
    std::vector<double> out = laplacian_neumann(v, grid);
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] - tau * out[i];
    return out;
  };
  const auto dot = [](const std::vector<double>& p, const std::vector<double>& q) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += p[i] * q[i];
    return s;
  };

  // Starting from x = u keeps every residual in the zero-sum subspace, so
  // the solve conserves mass independently of the stopping tolerance.
  std::vector<double> r = apply(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = u[i] - r[i];
  const double target = cfg.linsolve_tol * std::sqrt(dot(x, x));
  double rr = dot(r, r);
  std::vector<double> p = r;
  int iter = 0;
  while (std::sqrt(rr) > target) {
    if (iter >= cfg.linsolve_max_iter) {
      std::ostringstream msg;
      msg << "CG reached " << cfg.linsolve_max_iter << " iterations, residual " << std::sqrt(rr);
      throw Error(ErrorCode::lin_solve_failure, msg.str());
    }
    const std::vector<double> ap = apply(p);
    const double alpha = rr / dot(p, ap);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    const double rr_next = dot(r, r);
    const double beta = rr_next / rr;
    rr = rr_next;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = r[i] + beta * p[i];
    ++iter;
  }
  if (stats != nullptr) {
    ++stats->linear_solves;
    stats->linear_iterations += static_cast<std::size_t>(iter);
    stats->max_linear_iterations = std::max(stats->max_linear_iterations, iter);
  }
  return x;
}

namespace {

// exp(tau L_1d) for n Neumann cells of width h, from the cosine eigenbasis
// v_k(i) = cos(pi k (i + 1/2) / n), lambda_k = -(4/h^2) sin^2(pi k / (2n)).
std::vector<double> axis_exponential(int n, double h, double tau) {
  std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<double> decay(n);
  for (int k = 0; k < n; ++k) {
    const double s = std::sin(std::numbers::pi * k / (2.0 * n));
    decay[k] = std::exp(-tau * 4.0 * s * s / (h * h)) * (k == 0 ? 1.0 : 2.0) / n;
  }
  std::vector<double> basis(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      basis[static_cast<std::size_t>(i) * n + k] = std::cos(std::numbers::pi * k * (i + 0.5) / n);
    }
  }
  for (int i = 0; i < n; ++i) {
    const double* bi = &basis[static_cast<std::size_t>(i) * n];
    for (int j = i; j < n; ++j) {
      const double* bj = &basis[static_cast<std::size_t>(j) * n];
      double sum = 0.0;
      for (int k = 0; k < n; ++k) sum += decay[k] * bi[k] * bj[k];
      sum = std::max(sum, 0.0);  // rounding noise on entries that underflow
      m[static_cast<std::size_t>(i) * n + j] = sum;
      m[static_cast<std::size_t>(j) * n + i] = sum;
    }
  }
  // Re-balance the diagonal so every row (and column) sums to one.
  for (int i = 0; i < n; ++i) {
    double off = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j != i) off += m[static_cast<std::size_t>(i) * n + j];
    }
    m[static_cast<std::size_t>(i) * n + i] = 1.0 - off;
  }
  return m;
}

}  // namespace

HeatPropagator::HeatPropagator(const Grid& grid, double d, double tau) : grid_(&grid) {
  if (d < 0.0 || tau < 0.0) throw Error(ErrorCode::invalid_argument, "heat propagator needs d, tau >= 0");
  identity_ = d == 0.0 || tau == 0.0;
  if (identity_) return;
  for (int axis = 0; axis < grid.dimension(); ++axis) {
    axis_matrices_.push_back(axis_exponential(grid.cells(axis), grid.spacing(axis), d * tau));
  }
}

std::vector<double> HeatPropagator::apply(std::span<const double> u) const {
  std::vector<double> v(u.begin(), u.end());
  apply_in_place(v);
  return v;
}

void HeatPropagator::apply_in_place(std::vector<double>& u) const {
  if (identity_) return;
  const Grid& grid = *grid_;
  std::vector<double> line;
  std::vector<double> result;
  for (int axis = 0; axis < grid.dimension(); ++axis) {
    const auto n = static_cast<std::size_t>(grid.cells(axis));
    if (n == 1) continue;
    const std::size_t stride = grid.stride(axis);
    const std::vector<double>& m = axis_matrices_[axis];
    line.resize(n);
    result.resize(n);
    for (std::size_t start = 0; start < u.size(); ++start) {
      if ((start / stride) % n != 0) continue;
      for (std::size_t i = 0; i < n; ++i) line[i] = u[start + i * stride];
      for (std::size_t i = 0; i < n; ++i) {
        const double* row = &m[i * n];
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) sum += row[j] * line[j];
        result[i] = sum;
      }
      for (std::size_t i = 0; i < n; ++i) u[start + i * stride] = result[i];
    }
  }
}

SpeciesFields reaction_substep(const SpeciesFields& fields, double dt) {
  SpeciesFields out = fields;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const double c = fields.c[i];
    const double m1 = fields.a[i] + c;
    const double m2 = fields.b[i] + c;
    const RiccatiRoots roots = riccati_roots(m1, m2);
    if (std::abs(c - roots.r1) < 1e-15 * roots.r2) continue;
    // (c - r1)/(c - r2) decays like exp((r1 - r2) t) along the flow.
    const double u0 = (c - roots.r1) / (c - roots.r2);
    const double u = u0 * std::exp((roots.r1 - roots.r2) * dt);
    const double c_new = roots.r1 + (roots.r1 - roots.r2) * u / (1.0 - u);
    out.c[i] = c_new;
    out.a[i] = m1 - c_new;
    out.b[i] = m2 - c_new;
  }
  return out;
}

StrangStepper::StrangStepper(const ModelParams& params, const Grid& grid, const SolverConfig& cfg)
    : params_(params), grid_(&grid), cfg_(cfg) {
  params_.validate();
  if (cfg_.scheme == DiffusionScheme::exact) {
    for (double d : {params.d_a, params.d_b, params.d_c}) {
      half_.emplace_back(grid, d, 0.5 * cfg.dt);
      full_.emplace_back(grid, d, cfg.dt);
    }
  }
}

void StrangStepper::diffuse(SpeciesFields& fields, bool full) {
  std::vector<double>* species[] = {&fields.a, &fields.b, &fields.c};
  const double diffusivity[] = {params_.d_a, params_.d_b, params_.d_c};
  for (int s = 0; s < 3; ++s) {
    if (cfg_.scheme == DiffusionScheme::exact) {
      (full ? full_ : half_)[s].apply_in_place(*species[s]);
    } else {
      *species[s] = diffusion_substep(*species[s], diffusivity[s], 0.5 * cfg_.dt, *grid_, cfg_, &stats_);
    }
  }
}

void StrangStepper::half_diffusion(SpeciesFields& fields) { diffuse(fields, false); }

void StrangStepper::full_diffusion(SpeciesFields& fields) {
  if (!can_fuse()) {
    diffuse(fields, false);
    diffuse(fields, false);
    return;
  }
  diffuse(fields, true);
}

SpeciesFields StrangStepper::step(const SpeciesFields& fields) {
  SpeciesFields next = fields;
  half_diffusion(next);
  next = reaction_substep(next, cfg_.dt);
  half_diffusion(next);
  ++stats_.steps;
  return next;
}

SpeciesFields strang_step(const SpeciesFields& fields, const ModelParams& params, double dt, const Grid& grid,
                          const SolverConfig& cfg) {
  check_positive(fields);
  SolverConfig local = cfg;
  local.dt = dt;
  StrangStepper stepper(params, grid, local);
  return stepper.step(fields);
}

namespace {

void check_state(const SpeciesFields& fields, double t) {
  for (const auto* u : {&fields.a, &fields.b, &fields.c}) {
    for (double v : *u) {
      if (!std::isfinite(v) || !(v > 0.0)) {
        std::ostringstream msg;
        msg << "state lost positivity or finiteness at t = " << t;
        throw Error(ErrorCode::numerical_blowup, msg.str());
      }
    }
  }
}

void check_sample(const FunctionalSample& s) {
  bool finite = std::isfinite(s.E) && std::isfinite(s.E_rel) && std::isfinite(s.D) &&
                std::isfinite(s.ckp_lhs) && std::isfinite(s.abc_defect);
  for (const auto& [label, value] : s.diag_norms) finite = finite && std::isfinite(value);
  if (!finite) {
    std::ostringstream msg;
    msg << "non-finite functional at t = " << s.t;
    throw Error(ErrorCode::numerical_blowup, msg.str());
  }
}

}  // namespace

Trajectory run(const SpeciesFields& initial, const ModelParams& params, const Grid& grid,
               const DomainSpec& domain, const SolverConfig& cfg) {
  cfg.validate();
  params.validate();
  check_positive(initial);
  if (initial.size() != grid.size()) throw Error(ErrorCode::invalid_field, "initial data does not match grid");

  Trajectory traj;
  const Masses masses = conserved_masses(initial, domain);
  traj.equilibrium = equilibrium_state(masses.M1, masses.M2);

  StrangStepper stepper(params, grid, cfg);
  RunningIntegrals running;
  const auto record = [&](const SpeciesFields& fields, double t) {
    check_state(fields, t);
    traj.samples.push_back(sample(fields, t, traj.equilibrium, params, domain, grid, running));
    check_sample(traj.samples.back());
    traj.times.push_back(t);
    if (cfg.keep_snapshots) traj.snapshots.push_back(fields);
  };

  SpeciesFields fields = initial;
  record(fields, 0.0);
  const std::size_t steps = cfg.steps();
  const auto every = static_cast<std::size_t>(cfg.record_every);
  // Consecutive half diffusion steps are merged between recorded steps,
  // which is exact for the semigroup scheme.
  stepper.half_diffusion(fields);
  for (std::size_t n = 1; n <= steps; ++n) {
    fields = reaction_substep(fields, cfg.dt);
    const bool recorded = n % every == 0;
    if (recorded || n == steps) {
      stepper.half_diffusion(fields);
      if (recorded) record(fields, static_cast<double>(n) * cfg.dt);
      if (n < steps) stepper.half_diffusion(fields);
    } else {
      stepper.full_diffusion(fields);
    }
  }
  traj.final_fields = std::move(fields);
  traj.stats = stepper.stats();
  traj.stats.steps = steps;
  traj.stats.samples = traj.samples.size();
  return traj;
}

}  // namespace degrd
