#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "degrd/error.hpp"
#include "degrd/oracle.hpp"
#include "degrd/solver.hpp"
#include "test_util.hpp"

using namespace degrd;
using std::numbers::pi;

namespace {

double discrete_eigenvalue(double h, double L) { return 4.0 / (h * h) * std::pow(std::sin(pi * h / (2.0 * L)), 2); }

std::vector<double> cosine_mode(const Grid& grid, double eps) {
  std::vector<double> u(grid.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = 1.0 + eps * std::cos(pi * grid.center(i, 0) / grid.length(0));
  return u;
}

SpeciesFields preset_fields(const Grid& grid) {
  SpeciesFields f = SpeciesFields::uniform(grid.size(), 1, 1, 1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double phi = std::cos(pi * grid.center(i, 0) / grid.length(0));
    f.a[i] = 1.0 + 0.5 * phi;
    f.b[i] = 1.0 - 0.5 * phi;
    f.c[i] = f.a[i] * f.b[i];
  }
  return f;
}

double sup_diff(const SpeciesFields& x, const SpeciesFields& y) {
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    m = std::max({m, std::abs(x.a[i] - y.a[i]), std::abs(x.b[i] - y.b[i]), std::abs(x.c[i] - y.c[i])});
  }
  return m;
}

SpeciesFields integrate_to(const SpeciesFields& f, const ModelParams& p, const Grid& grid, double dt, double t,
                           DiffusionScheme scheme) {
  SolverConfig cfg;
  cfg.dt = dt;
  cfg.scheme = scheme;
  StrangStepper stepper(p, grid, cfg);
  SpeciesFields u = f;
  const int steps = static_cast<int>(std::lround(t / dt));
  for (int n = 0; n < steps; ++n) u = stepper.step(u);
  return u;
}

}  // namespace

TEST(SolverConfig, Validation) {
  SolverConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.dt = 2.0;
  EXPECT_THROW(cfg.validate(), Error);  // dt >= t_end
  cfg = {};
  cfg.linsolve_tol = 1e-5;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.record_every = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.t_end = 1.0005;
  EXPECT_THROW(cfg.steps(), Error);
  cfg.t_end = 50.0;
  EXPECT_EQ(cfg.steps(), 50000u);
}

TEST(DiffusionSubstep, ConstantAndDegenerate) {
  const Grid grid(DomainSpec::box({1.0}), {32});
  const SolverConfig cfg;
  const std::vector<double> k(32, 1.7);
  const auto v = diffusion_substep(k, 0.8, 0.1, grid, cfg);
  for (double x : v) EXPECT_NEAR(x, 1.7, 1e-14);
  std::mt19937_64 rng(2);
  std::vector<double> u(32);
  for (auto& x : u) x = 0.1 + test::unit(rng);
  EXPECT_EQ(diffusion_substep(u, 0.0, 0.1, grid, cfg), u);
}

TEST(DiffusionSubstep, DampsEigenmodeByBackwardEulerFactor) {
  const double L = 2.0, d = 0.3, dt = 0.05, eps = 0.2;
  const Grid grid(DomainSpec::box({L}), {64});
  const auto u = cosine_mode(grid, eps);
  SolverConfig cfg;
  const auto v = diffusion_substep(u, d, dt, grid, cfg);
  const double factor = 1.0 / (1.0 + dt * d * discrete_eigenvalue(grid.spacing(0), L));
  for (std::size_t i = 0; i < u.size(); ++i) EXPECT_NEAR(v[i], 1.0 + factor * (u[i] - 1.0), 1e-12);
}

TEST(DiffusionSubstep, ConservesMassAndPositivity) {
  std::mt19937_64 rng(7);
  const Grid grid(DomainSpec::box({1.0, 2.0}), {12, 10});
  SolverConfig cfg;
  SolverStats stats;
  for (int k = 0; k < 20; ++k) {
    std::vector<double> u(grid.size());
    for (auto& x : u) x = 1e-4 + 10.0 * std::pow(test::unit(rng), 4);
    const auto v = diffusion_substep(u, 2.0, 0.3, grid, cfg, &stats);
    EXPECT_LE(test::rel(integrate(v, grid), integrate(u, grid)), 1e-12);
    for (double x : v) EXPECT_GT(x, 0.0);
  }
  EXPECT_EQ(stats.linear_solves, 20u);
  EXPECT_GT(stats.linear_iterations, 0u);
}

TEST(DiffusionSubstep, IterationCapRaises) {
  const Grid grid(DomainSpec::box({1.0}), {64});
  SolverConfig cfg;
  cfg.linsolve_max_iter = 2;
  try {
    diffusion_substep(cosine_mode(grid, 0.5), 1.0, 1.0, grid, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::lin_solve_failure);
  }
}

TEST(HeatPropagator, DampsEigenmodeExactly) {
  const double L = 1.5, d = 0.4, tau = 0.2, eps = 0.3;
  const Grid grid(DomainSpec::box({L}), {48});
  const auto u = cosine_mode(grid, eps);
  const auto v = HeatPropagator(grid, d, tau).apply(u);
  const double factor = std::exp(-tau * d * discrete_eigenvalue(grid.spacing(0), L));
  for (std::size_t i = 0; i < u.size(); ++i) EXPECT_NEAR(v[i], 1.0 + factor * (u[i] - 1.0), 1e-13);
}

TEST(HeatPropagator, PositiveConservativeSemigroup) {
  std::mt19937_64 rng(8);
  const Grid grid(DomainSpec::box({1.0, 0.5, 2.0}), {6, 3, 8});
  std::vector<double> u(grid.size());
  for (auto& x : u) x = 1e-6 + std::pow(test::unit(rng), 6);
  const auto once = HeatPropagator(grid, 0.7, 0.3).apply(u);
  auto twice = HeatPropagator(grid, 0.7, 0.1).apply(u);
  HeatPropagator(grid, 0.7, 0.2).apply_in_place(twice);
  EXPECT_LE(test::rel(integrate(once, grid), integrate(u, grid)), 1e-13);
  for (std::size_t i = 0; i < u.size(); ++i) {
    EXPECT_GT(once[i], 0.0);
    EXPECT_NEAR(once[i], twice[i], 1e-13);
  }
  EXPECT_EQ(HeatPropagator(grid, 0.0, 0.3).apply(u), u);
}

TEST(ReactionSubstep, EquilibriumIsFixed) {
  const double a = std::sqrt(2.0), b = std::sqrt(2.0) - 1.0, c = 2.0 - std::sqrt(2.0);
  for (double dt : {1e-3, 0.1, 10.0, 1e6}) {
    const auto r = reaction_substep(SpeciesFields::uniform(1, a, b, c), dt);
    EXPECT_NEAR(r.a[0], a, 1e-15);
    EXPECT_NEAR(r.b[0], b, 1e-15);
    EXPECT_NEAR(r.c[0], c, 1e-15);
  }
}

TEST(ReactionSubstep, LongTimeAttractor) {
  const auto r = reaction_substep(SpeciesFields::uniform(1, 2.0, 1.0, 1e-12), 200.0);
  EXPECT_NEAR(r.a[0], std::sqrt(2.0), 1e-10);
  EXPECT_NEAR(r.b[0], std::sqrt(2.0) - 1.0, 1e-10);
  EXPECT_NEAR(r.c[0], 2.0 - std::sqrt(2.0), 1e-10);
}

TEST(ReactionSubstep, ConservesAndStaysBetweenStartAndRoot) {
  std::mt19937_64 rng(13);
  const auto f = test::noise_fields(2000, rng, 1e-3, 6.0);
  for (double dt : {1e-4, 0.1, 3.0}) {
    const auto r = reaction_substep(f, dt);
    for (std::size_t i = 0; i < f.size(); ++i) {
      EXPECT_LE(test::rel(r.a[i] + r.c[i], f.a[i] + f.c[i]), 4.5e-16);
      EXPECT_LE(test::rel(r.b[i] + r.c[i], f.b[i] + f.c[i]), 4.5e-16);
      const double r1 = riccati_roots(f.a[i] + f.c[i], f.b[i] + f.c[i]).r1;
      EXPECT_GE(r.c[i], std::min(f.c[i], r1) * (1 - 1e-14));
      EXPECT_LE(r.c[i], std::max(f.c[i], r1) * (1 + 1e-14));
      EXPECT_GT(r.a[i], 0.0);
      EXPECT_GT(r.b[i], 0.0);
    }
  }
}

TEST(ReactionSubstep, MatchesRk4Oracle) {
  std::mt19937_64 rng(14);
  for (int k = 0; k < 100; ++k) {
    const double a = 0.01 + 5 * test::unit(rng), b = 0.01 + 5 * test::unit(rng), c = 0.01 + 5 * test::unit(rng);
    const auto r = reaction_substep(SpeciesFields::uniform(1, a, b, c), 0.1);
    const auto o = oracle::homogeneous_ode(a, b, c, 0.1, 10000);
    EXPECT_NEAR(r.a[0], o.a, 1e-10);
    EXPECT_NEAR(r.b[0], o.b, 1e-10);
    EXPECT_NEAR(r.c[0], o.c, 1e-10);
  }
}

TEST(StrangStep, UniformDataReducesToReaction) {
  const Grid grid(DomainSpec::box({1.0, 1.0}), {4, 4});
  const auto f = SpeciesFields::uniform(16, 2.0, 0.5, 0.3);
  for (auto scheme : {DiffusionScheme::exact, DiffusionScheme::backward_euler}) {
    SolverConfig cfg;
    cfg.scheme = scheme;
    const auto s = strang_step(f, {1, 1, 0}, 0.05, grid, cfg);
    const auto r = reaction_substep(f, 0.05);
    EXPECT_LE(sup_diff(s, r), 1e-14);
  }
}

TEST(StrangStep, EquilibriumUnchanged) {
  const Grid grid(DomainSpec::box({1.0}), {10});
  const auto eq = equilibrium_state(1.3, 0.4);
  const auto f = SpeciesFields::uniform(10, eq.a_inf, eq.b_inf, eq.c_inf);
  const auto s = strang_step(f, {1, 0, 1}, 0.1, grid, SolverConfig{});
  EXPECT_LE(sup_diff(s, f), 1e-14);
}

TEST(StrangStep, ExactDiffusionIsSecondOrder) {
  const Grid grid(DomainSpec::box({1.0}), {128});
  const auto f = preset_fields(grid);
  const ModelParams p{0.06, 0.03, 0.05};
  const auto ref = integrate_to(f, p, grid, 1e-4, 1.0, DiffusionScheme::exact);
  const double e1 = sup_diff(integrate_to(f, p, grid, 0.02, 1.0, DiffusionScheme::exact), ref);
  const double e2 = sup_diff(integrate_to(f, p, grid, 0.01, 1.0, DiffusionScheme::exact), ref);
  EXPECT_GE(std::log2(e1 / e2), 1.9);
}

TEST(StrangStep, BackwardEulerHalvesAreFirstOrder) {
  // BE(dt/2)^2 = I + dt A + (3/4) dt^2 A^2 + ..., which does not match
  // exp(dt A) at second order.
  const Grid grid(DomainSpec::box({1.0}), {32});
  const auto f = preset_fields(grid);
  const ModelParams p{0.5, 0.3, 0.4};
  const auto ref = integrate_to(f, p, grid, 1e-4, 0.2, DiffusionScheme::exact);
  const double e1 = sup_diff(integrate_to(f, p, grid, 0.02, 0.2, DiffusionScheme::backward_euler), ref);
  const double e2 = sup_diff(integrate_to(f, p, grid, 0.01, 0.2, DiffusionScheme::backward_euler), ref);
  const double order = std::log2(e1 / e2);
  EXPECT_GT(order, 0.8);
  EXPECT_LT(order, 1.3);
}

TEST(Run, UniformDataFollowsHomogeneousOde) {
  for (const auto& cells : std::vector<std::vector<int>>{{8}, {3, 4}}) {
    const auto domain = DomainSpec::box(std::vector<double>(cells.size(), 1.0));
    const Grid grid(domain, cells);
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 5.0;
    cfg.record_every = 100;
    cfg.keep_snapshots = true;
    const auto traj = run(SpeciesFields::uniform(grid.size(), 2.0, 1.0, 0.01), {1.0, 0.0, 0.5}, grid, domain, cfg);
    ASSERT_EQ(traj.snapshots.size(), traj.times.size());
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
      const auto o = oracle::homogeneous_ode(2.0, 1.0, 0.01, traj.times[k],
                                             std::max(1, static_cast<int>(std::lround(traj.times[k] / 1e-3))));
      for (std::size_t i = 0; i < grid.size(); ++i) {
        EXPECT_NEAR(traj.snapshots[k].a[i], o.a, 1e-6);
        EXPECT_NEAR(traj.snapshots[k].c[i], o.c, 1e-6);
      }
    }
  }
}

TEST(Run, EquilibriumStaysPut) {
  const auto domain = DomainSpec::box({1.0});
  const Grid grid(domain, {16});
  const auto eq = equilibrium_state(2.0, 3.0);
  SolverConfig cfg;
  cfg.t_end = 2.0;
  const auto traj = run(SpeciesFields::uniform(16, eq.a_inf, eq.b_inf, eq.c_inf), {1, 1, 0}, grid, domain, cfg);
  EXPECT_EQ(traj.samples.size(), 21u);
  for (const auto& s : traj.samples) {
    EXPECT_LE(s.E_rel, 1e-12);
    EXPECT_LE(s.D, 1e-12);
  }
}

TEST(Run, TimesMassesAndMonotoneEntropy) {
  const auto domain = DomainSpec::box({1.0});
  const Grid grid(domain, {64});
  const auto f = preset_fields(grid);
  for (auto scheme : {DiffusionScheme::exact, DiffusionScheme::backward_euler}) {
    for (const ModelParams& p : {ModelParams{0.1, 0.05, 0.08}, ModelParams{0.1, 0.0, 0.1}, ModelParams{0.1, 0.1, 0.0}}) {
      SolverConfig cfg;
      cfg.t_end = 3.0;
      cfg.record_every = 50;
      cfg.scheme = scheme;
      const auto traj = run(f, p, grid, domain, cfg);
      ASSERT_EQ(traj.times.size(), 61u);
      EXPECT_EQ(traj.times.front(), 0.0);
      EXPECT_EQ(traj.stats.steps, 3000u);
      for (std::size_t k = 1; k < traj.times.size(); ++k) {
        EXPECT_GT(traj.times[k], traj.times[k - 1]);
        EXPECT_LE(traj.samples[k].E_rel, traj.samples[k - 1].E_rel + 50e-12);
        EXPECT_LE(test::rel(traj.samples[k].M1, traj.samples[0].M1), 1e-9);
        EXPECT_LE(test::rel(traj.samples[k].M2, traj.samples[0].M2), 1e-9);
      }
      for (std::size_t i = 0; i < grid.size(); ++i) {
        EXPECT_GT(traj.final_fields.a[i], 0.0);
        EXPECT_GT(traj.final_fields.b[i], 0.0);
        EXPECT_GT(traj.final_fields.c[i], 0.0);
      }
      if (scheme == DiffusionScheme::backward_euler) EXPECT_GT(traj.stats.linear_solves, 0u);
    }
  }
}

TEST(Run, RejectsMismatchedInput) {
  const auto domain = DomainSpec::box({1.0});
  const Grid grid(domain, {8});
  EXPECT_THROW(run(SpeciesFields::uniform(7, 1, 1, 1), {1, 1, 1}, grid, domain, SolverConfig{}), Error);
  EXPECT_THROW(run(SpeciesFields::uniform(8, 1, 0, 1), {1, 1, 1}, grid, domain, SolverConfig{}), Error);
  EXPECT_THROW(run(SpeciesFields::uniform(8, 1, 1, 1), {1, 0, 0}, grid, domain, SolverConfig{}), Error);
}
