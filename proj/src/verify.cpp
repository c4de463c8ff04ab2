// Built-in property suites for the verify command.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "degrd/commands.hpp"
#include "degrd/error.hpp"
#include "degrd/grid.hpp"
#include "degrd/oracle.hpp"
#include "degrd/solver.hpp"

namespace degrd {

namespace {

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double rel_diff(double x, double y, double floor) {
  return std::abs(x - y) / std::max({std::abs(x), std::abs(y), floor});
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

/// White noise floor + amp U or a smooth exp(sum of low cosine modes).
SpeciesFields random_fields(const Grid& grid, std::mt19937_64& rng, bool smooth) {
  const std::size_t n = grid.size();
  SpeciesFields f{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  for (auto* u : {&f.a, &f.b, &f.c}) {
    if (!smooth) {
      const double floor = 0.05 + unit(rng);
      const double amp = 3.0 * unit(rng);
      for (auto& v : *u) v = floor + amp * unit(rng);
      continue;
    }
    const double base = 0.2 + 2.0 * unit(rng);
    double coeff[4];
    for (double& k : coeff) k = unit(rng) - 0.5;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (int k = 0; k < 4; ++k) {
        double mode = 1.0;
        for (int axis = 0; axis < grid.dimension(); ++axis) {
          mode *= std::cos(std::numbers::pi * (k + 1) * grid.center(i, axis) / grid.length(axis));
        }
        s += coeff[k] * mode;
      }
      (*u)[i] = base * std::exp(s);
    }
  }
  return f;
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

Outcome equilibrium_algebra(std::mt19937_64& rng) {
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double M1 = 10.0 * (1.0 - unit(rng));  // (0, 10]
    const double M2 = 10.0 * (1.0 - unit(rng));
    const auto eq = equilibrium_state(M1, M2);
    worst = std::max({worst, rel_diff(eq.a_inf + eq.c_inf, M1, 0.0), rel_diff(eq.b_inf + eq.c_inf, M2, 0.0),
                      rel_diff(eq.a_inf * eq.b_inf, eq.c_inf, 1e-300)});
  }
  const double c11 = equilibrium_state(1.0, 1.0).c_inf;
  const double c21 = equilibrium_state(2.0, 1.0).c_inf;
  const double e11 = rel_diff(c11, (3.0 - std::sqrt(5.0)) / 2.0, 0.0);
  const double e21 = rel_diff(c21, 2.0 - std::sqrt(2.0), 0.0);
  return {worst <= 1e-12 && e11 <= 1e-12 && e21 <= 1e-12,
          "1000 random masses, worst residual " + sci(worst) + "; (1,1) " + sci(e11) + ", (2,1) " + sci(e21)};
}

Outcome gamma_function() {
  Outcome out;
  const double diag = gamma_ratio(3.0, 3.0);
  const double edge = gamma_ratio(0.0, 2.0);
  const double near = gamma_ratio(3.0 * (1.0 + 1e-9), 3.0);
  const double k = fit_gamma_bound_constant(1e-3, 1e3, 60);
  out.pass = std::abs(diag - 2.0) <= 1e-14 && std::abs(edge - 1.0) <= 1e-14 && std::abs(near - 2.0) <= 1e-8 &&
             std::isfinite(k) && k > 0.0;
  out.detail = "Gamma(x,x) = 2, Gamma(0,y) = 1, bound constant over [1e-3,1e3]^2: " + sci(k);
  return out;
}

Outcome oracle_equivalence(std::mt19937_64& rng) {
  double worst_pde = 0.0;
  const std::vector<std::vector<int>> shapes = {{16}, {6, 5}, {3, 3, 3}};
  for (const auto& cells : shapes) {
    const DomainSpec domain = DomainSpec::box(std::vector<double>(cells.size(), 1.0));
    const Grid grid(domain, cells);
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 5.0;
    cfg.record_every = 250;
    cfg.keep_snapshots = true;
    const auto traj = run(SpeciesFields::uniform(grid.size(), 2.0, 1.0, 0.01), {1.0, 0.5, 0.2}, grid, domain, cfg);
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
      const double t = traj.times[k];
      const int substeps = std::max(1, static_cast<int>(std::lround(t / 1e-3)));
      const auto ref = oracle::homogeneous_ode(2.0, 1.0, 0.01, t, substeps);
      const auto& f = traj.snapshots[k];
      for (std::size_t i = 0; i < f.size(); ++i) {
        worst_pde = std::max({worst_pde, std::abs(f.a[i] - ref.a), std::abs(f.b[i] - ref.b), std::abs(f.c[i] - ref.c)});
      }
    }
  }
  double worst_reaction = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double a = 0.01 + 5.0 * unit(rng), b = 0.01 + 5.0 * unit(rng), c = 0.01 + 5.0 * unit(rng);
    const auto next = reaction_substep(SpeciesFields::uniform(1, a, b, c), 0.1);
    const auto ref = oracle::homogeneous_ode(a, b, c, 0.1, 10000);
    worst_reaction = std::max({worst_reaction, std::abs(next.a[0] - ref.a), std::abs(next.b[0] - ref.b),
                               std::abs(next.c[0] - ref.c)});
  }
  return {worst_pde <= 1e-6 && worst_reaction <= 1e-10,
          "uniform runs vs ODE to t = 5: " + sci(worst_pde) + "; reaction step vs RK4: " + sci(worst_reaction)};
}

Outcome operator_properties(std::mt19937_64& rng) {
  double conservation = 0.0, symmetry = 0.0, definiteness = 0.0, semigroup = 0.0;
  bool positive = true;
  const std::vector<std::vector<int>> shapes = {{64}, {12, 9}, {5, 4, 6}};
  for (const auto& cells : shapes) {
    std::vector<double> lengths;
    for (std::size_t k = 0; k < cells.size(); ++k) lengths.push_back(0.5 + unit(rng));
    const Grid grid(DomainSpec::box(lengths), cells);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> u(grid.size()), v(grid.size());
      for (auto& x : u) x = unit(rng) - 0.5;
      for (auto& x : v) x = unit(rng) - 0.5;
      const auto lu = laplacian_neumann(u, grid);
      const auto lv = laplacian_neumann(v, grid);
      double scale = 0.0;
      for (double x : lu) scale += std::abs(x);
      scale *= grid.cell_volume();
      conservation = std::max(conservation, std::abs(integrate(lu, grid)) / scale);
      const double uv = inner_product(lu, v, grid), vu = inner_product(u, lv, grid);
      symmetry = std::max(symmetry, rel_diff(uv, vu, 1e-300));
      const double ulu = inner_product(u, lu, grid);
      const double energy = dirichlet_energy(u, grid);
      definiteness = std::max(definiteness, ulu > 0.0 ? 1.0 : rel_diff(-ulu, energy, 1e-300));

      std::vector<double> w(grid.size());
      for (auto& x : w) x = 0.1 + unit(rng);
      const HeatPropagator heat(grid, 0.7, 0.05);
      const auto hw = heat.apply(w);
      positive = positive && std::all_of(hw.begin(), hw.end(), [](double x) { return x > 0.0; });
      semigroup = std::max(semigroup, rel_diff(integrate(hw, grid), integrate(w, grid), 0.0));
    }
  }
  const bool pass = conservation <= 1e-12 && symmetry <= 1e-12 && definiteness <= 1e-12 && semigroup <= 1e-12 &&
                    positive;
  return {pass, "Laplacian sum " + sci(conservation) + ", symmetry " + sci(symmetry) + ", -<u,Lu> vs energy " +
                    sci(definiteness) + "; heat semigroup mass " + sci(semigroup) +
                    (positive ? ", positive" : ", NOT positive")};
}

Outcome inequality_ensembles(std::mt19937_64& rng) {
  const DomainSpec domain = DomainSpec::box({1.0});
  const Grid grid(domain, {128});
  const ModelParams modes[] = {{1.0, 0.7, 0.4}, {1.0, 0.0, 0.4}, {1.0, 0.7, 0.0}};
  std::size_t ckp = 0, bound = 0, negative = 0, sign = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto f = random_fields(grid, rng, trial % 2 == 1);
    const auto m = conserved_masses(f, domain);
    const auto eq = equilibrium_state(m.M1, m.M2);
    const auto& params = modes[trial % 3];
    const double e_rel = relative_entropy(f, eq, grid);
    const double lower = ckp_lower_bound(f, eq, grid);
    if (lower > e_rel * (1.0 + 1e-10)) ++ckp;
    const auto b = dissipation_deviation_bound(f, params, domain, grid);
    if (b.lhs < b.rhs * (1.0 - 1e-10)) ++bound;
    if (e_rel < 0.0 || b.lhs < 0.0 || lower < 0.0) ++negative;
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (reaction_dissipation_density(f.a[i], f.b[i], f.c[i]) < 0.0) ++sign;
    }
  }
  return {ckp == 0 && bound == 0 && negative == 0 && sign == 0,
          "1000 fields: CKP " + std::to_string(ckp) + ", dissipation bound " + std::to_string(bound) +
              ", negative functionals " + std::to_string(negative) + ", reaction sign " + std::to_string(sign) +
              " violations"};
}

Outcome brute_force_agreement(std::mt19937_64& rng) {
  double worst = 0.0;
  const std::vector<std::vector<int>> shapes = {{128}, {10, 7}, {4, 3, 5}};
  for (int trial = 0; trial < 100; ++trial) {
    const auto& cells = shapes[trial % 3];
    const DomainSpec domain = DomainSpec::box(std::vector<double>(cells.size(), 1.0));
    const Grid grid(domain, cells);
    const ModelParams params{1.0, trial % 3 == 1 ? 0.0 : 0.6, trial % 3 == 2 ? 0.0 : 0.3};
    const auto f = random_fields(grid, rng, trial % 2 == 0);
    const auto m = conserved_masses(f, domain);
    const auto eq = equilibrium_state(m.M1, m.M2);
    RunningIntegrals running;
    const auto s = sample(f, 0.0, eq, params, domain, grid, running);
    const auto r = oracle::brute_force_sample(f, eq, params, domain, grid);
    const double pairs[][2] = {{s.E, r.E},           {s.E_rel, r.E_rel},         {s.D, r.D},
                               {s.M1, r.M1},         {s.M2, r.M2},               {s.dev_A2, r.dev_A2},
                               {s.dev_B2, r.dev_B2}, {s.dev_C2, r.dev_C2},       {s.abc_defect, r.abc_defect},
                               {s.l1_dist_a, r.l1_dist_a}, {s.l1_dist_b, r.l1_dist_b}, {s.l1_dist_c, r.l1_dist_c},
                               {s.ckp_lhs, r.ckp_lhs}};
    for (const auto& p : pairs) worst = std::max(worst, rel_diff(p[0], p[1], 1e-300));
    for (const auto& [label, value] : s.diag_norms) {
      const auto it = r.diag_norms.find(label);
      worst = std::max(worst, it == r.diag_norms.end() ? 1.0 : rel_diff(value, it->second, 1e-300));
    }
  }
  return {worst <= 1e-12, "100 fields vs naive summation, worst relative difference " + sci(worst)};
}

Outcome short_run() {
  const DomainSpec domain = DomainSpec::box({1.0});
  const Grid grid(domain, {64});
  SpeciesFields f{std::vector<double>(64), std::vector<double>(64), std::vector<double>(64)};
  for (std::size_t i = 0; i < 64; ++i) {
    const double phi = std::cos(std::numbers::pi * grid.center(i, 0));
    f.a[i] = 1.0 + 0.5 * phi;
    f.b[i] = 1.0 - 0.5 * phi;
    f.c[i] = 0.5;
  }
  SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 5.0;
  cfg.record_every = 50;
  double drift = 0.0;
  std::size_t increases = 0, bad_d = 0;
  for (const ModelParams& params : {ModelParams{0.1, 0.05, 0.08}, ModelParams{0.1, 0.0, 0.1},
                                    ModelParams{0.1, 0.1, 0.0}}) {
    const auto traj = run(f, params, grid, domain, cfg);
    const auto& first = traj.samples.front();
    for (std::size_t k = 0; k < traj.samples.size(); ++k) {
      const auto& s = traj.samples[k];
      drift = std::max({drift, rel_diff(s.M1, first.M1, 0.0), rel_diff(s.M2, first.M2, 0.0)});
      if (k > 0 && s.E_rel > traj.samples[k - 1].E_rel + 1e-12 * cfg.record_every) ++increases;
      if (!(s.D >= 0.0)) ++bad_d;
    }
  }
  return {drift <= 1e-9 && increases == 0 && bad_d == 0,
          "three modes to t = 5: mass drift " + sci(drift) + ", E_rel increases " + std::to_string(increases) +
              ", negative D " + std::to_string(bad_d)};
}

}  // namespace

std::vector<SuiteResult> run_verify_suites(const VerifyOptions& options) {
  std::mt19937_64 rng(options.seed);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> suites = {
      {"equilibrium algebra", [&] { return equilibrium_algebra(rng); }},
      {"gamma function", [] { return gamma_function(); }},
      {"oracle equivalence", [&] { return oracle_equivalence(rng); }},
      {"operator properties", [&] { return operator_properties(rng); }},
      {"inequality ensembles", [&] { return inequality_ensembles(rng); }},
      {"brute-force agreement", [&] { return brute_force_agreement(rng); }},
      {"short runs", [] { return short_run(); }},
  };

  fault::set_flip_reaction_sign(options.inject_dissipation_sign_flip);
  std::vector<SuiteResult> results;
  for (const auto& [name, body] : suites) {
    SuiteResult r;
    r.name = name;
    const auto start = std::chrono::steady_clock::now();
    try {
      const Outcome o = body();
      r.pass = o.pass;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("threw ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    results.push_back(std::move(r));
  }
  fault::set_flip_reaction_sign(false);
  return results;
}

int cmd_verify(const VerifyOptions& options, std::ostream& out) {
  const auto results = run_verify_suites(options);
  std::size_t failed = 0;
  for (const auto& r : results) {
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.2fs", r.seconds);
    out << (r.pass ? "PASS  " : "FAIL  ") << r.name << " (" << secs << "): " << r.detail << '\n';
    if (!r.pass) ++failed;
  }
  out << results.size() - failed << "/" << results.size() << " suites passed\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace degrd
