#include "degrd/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "degrd/error.hpp"
#include "degrd/grid.hpp"
#include "degrd/io.hpp"
#include "degrd/solver.hpp"

namespace degrd {

namespace fs = std::filesystem;

namespace {

std::string scheme_name(DiffusionScheme scheme) {
  return scheme == DiffusionScheme::exact ? "exact" : "backward_euler";
}

std::string run_meta(const RunConfig& config, const std::string& status, const SolverStats* stats) {
  std::ostringstream out;
  out << serialize_config(config);
  out << "# status = " << status << '\n';
  out << "# diffusion_scheme = " << scheme_name(config.solver().scheme) << '\n';
  if (stats != nullptr) {
    out << "# steps = " << stats->steps << '\n';
    out << "# samples = " << stats->samples << '\n';
    out << "# linear_solves = " << stats->linear_solves << '\n';
    out << "# linear_iterations = " << stats->linear_iterations << '\n';
    out << "# max_linear_iterations = " << stats->max_linear_iterations << '\n';
  }
  return out.str();
}

std::string fmt(const char* format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, value);
  return buf;
}

}  // namespace

int cmd_run(const RunConfig& config, std::ostream& log) {
  const DomainSpec domain = config.domain();
  const Grid grid(domain, config.cells);
  const SpeciesFields initial = initial_fields(config, grid);

  const fs::path dir(config.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io_error, "cannot create " + dir.string() + ": " + ec.message());

  Trajectory traj;
  try {
    traj = run(initial, config.params(), grid, domain, config.solver());
  } catch (const Error& e) {
    if (e.code() != ErrorCode::numerical_blowup && e.code() != ErrorCode::lin_solve_failure) throw;
    write_file((dir / kRunMetaFile).string(), run_meta(config, e.what(), nullptr));
    log << "run failed: " << e.what() << '\n';
    return 2;
  }

  write_timeseries((dir / kTimeseriesFile).string(), traj.samples);
  write_snapshot((dir / kFinalFieldsFile).string(),
                 Snapshot{config.dim, config.cells, config.lengths, traj.final_fields});
  write_file((dir / kRunMetaFile).string(), run_meta(config, "ok", &traj.stats));

  const auto& last = traj.samples.back();
  log << "mode " << to_string(config.params().mode()) << ", " << grid.size() << " cells, " << traj.stats.steps
      << " steps, " << traj.samples.size() << " samples\n";
  log << "equilibrium (a, b, c) = (" << format_double(traj.equilibrium.a_inf) << ", "
      << format_double(traj.equilibrium.b_inf) << ", " << format_double(traj.equilibrium.c_inf) << ")\n";
  log << "E_rel: " << fmt("%.6e", traj.samples.front().E_rel) << " -> " << fmt("%.6e", last.E_rel) << '\n';
  log << "wrote " << (dir / kTimeseriesFile).string() << ", " << (dir / kFinalFieldsFile).string() << ", "
      << (dir / kRunMetaFile).string() << '\n';
  return 0;
}

bool AnalysisReport::all_pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return !checks.empty();
}

AnalysisReport analyze_samples(const std::vector<FunctionalSample>& samples, const AnalyzeOptions& options,
                               const std::optional<RunConfig>& meta) {
  if (samples.empty()) throw Error(ErrorCode::invalid_argument, "no samples to analyze");
  if (options.dimension < 1 || options.dimension > 3) {
    throw Error(ErrorCode::invalid_argument, "dimension must be 1, 2 or 3");
  }
  if (meta) {
    if (meta->params().mode() != options.mode) {
      throw Error(ErrorCode::invalid_argument, "mode " + std::string(to_string(options.mode)) +
                                                   " contradicts run metadata (" +
                                                   std::string(to_string(meta->params().mode())) + ")");
    }
    if (meta->dim != options.dimension) throw Error(ErrorCode::invalid_argument, "dimension contradicts run metadata");
  }

  AnalysisReport report;
  report.samples = samples.size();

  // Decay envelope.
  {
    std::vector<double> t, e;
    for (const auto& s : samples) {
      if (s.t >= options.fit_from) {
        t.push_back(s.t);
        e.push_back(s.E_rel);
      }
    }
    CheckResult check{"decay envelope", false, ""};
    try {
      report.fit = fit_subexponential(t, e);
      report.envelope = check_theorem_envelope(*report.fit, options.mode, options.dimension);
      check.pass = report.envelope->pass;
      check.detail = "alpha " + fmt("%.2f", report.fit->alpha) + " vs target " +
                     fmt("%.4f", report.envelope->theoretical_alpha) + ", S1 " + fmt("%.4g", report.fit->S1) +
                     ", S2 " + fmt("%.4g", report.fit->S2) + ", window [" + fmt("%g", report.fit->t_first) + ", " +
                     fmt("%g", report.fit->t_last) + "], " + std::to_string(report.fit->samples_used) + " samples";
      if (!report.fit->envelope_holds) check.detail += ", envelope broken";
    } catch (const Error& err) {
      // A run that starts at equilibrium has nothing to fit.
      check.pass = err.code() == ErrorCode::already_converged;
      check.detail = err.what();
    }
    report.checks.push_back(check);
  }

  // Entropy balance.
  {
    CheckResult check{"entropy balance", false, ""};
    try {
      report.balance = entropy_balance_audit(samples);
      check.pass = report.balance->max_relative_residual <= options.balance_tol;
      check.detail = "max residual " + fmt("%.4e", report.balance->max_relative_residual) + " at t = " +
                     fmt("%g", report.balance->worst_time) + " (tolerance " + fmt("%g", options.balance_tol) + ")";
    } catch (const Error& err) {
      check.detail = err.what();
    }
    report.checks.push_back(check);
  }

  // Monotone relative entropy, 1e-12 slack per solver step.
  {
    const double steps_per_sample = meta ? meta->record_every : 1.0;
    for (std::size_t k = 1; k < samples.size(); ++k) {
      if (samples[k].E_rel > samples[k - 1].E_rel + 1e-12 * steps_per_sample) ++report.monotonicity_violations;
    }
    report.checks.push_back({"monotone E_rel", report.monotonicity_violations == 0,
                             std::to_string(report.monotonicity_violations) + " increases"});
  }

  // CKP.
  {
    for (const auto& s : samples) {
      if (s.ckp_lhs > s.E_rel * (1.0 + 1e-10)) ++report.ckp_violations;
    }
    report.checks.push_back({"CKP", report.ckp_violations == 0, std::to_string(report.ckp_violations) + " violations"});
  }

  // Dissipation lower bound.
  {
    report.full_bound = meta.has_value();
    std::optional<double> discrete_p;
    double analytic_p = 0.0;
    ModelParams params;
    if (meta) {
      params = meta->params();
      const DomainSpec domain = meta->domain();
      analytic_p = domain.poincare_constant;
      discrete_p = 1.0 / smallest_neumann_eigenvalue(Grid(domain, meta->cells));
      report.discrete_bound_violations = 0;
    }
    const auto rhs_for = [&](const FunctionalSample& s, double p) {
      double rhs = 4.0 * s.abc_defect;
      if (!meta) return rhs;
      if (params.d_a > 0.0) rhs += 4.0 * params.d_a / p * s.dev_A2;
      if (params.d_b > 0.0) rhs += 4.0 * params.d_b / p * s.dev_B2;
      if (params.d_c > 0.0) rhs += 4.0 * params.d_c / p * s.dev_C2;
      return rhs;
    };
    for (const auto& s : samples) {
      const double rhs = rhs_for(s, analytic_p);
      if (s.D < rhs * (1.0 - 1e-10)) {
        ++report.bound_violations;
        report.worst_bound_violation = std::max(report.worst_bound_violation, (rhs - s.D) / rhs);
      }
      if (discrete_p && s.D < rhs_for(s, *discrete_p) * (1.0 - 1e-10)) ++*report.discrete_bound_violations;
    }
    std::string detail = std::to_string(report.bound_violations) + " violations";
    if (report.bound_violations > 0) detail += " (worst relative " + fmt("%.3e", report.worst_bound_violation) + ")";
    detail += report.full_bound ? ", analytic Poincare constant" : ", reaction term only (no run metadata)";
    if (report.discrete_bound_violations) {
      detail += "; " + std::to_string(*report.discrete_bound_violations) + " with the discrete eigenvalue";
    }
    report.checks.push_back({"dissipation bound", report.bound_violations == 0, detail});
  }

  // Mass conservation.
  {
    const auto& first = samples.front();
    for (const auto& s : samples) {
      const double d1 = std::abs(s.M1 - first.M1) / std::max(std::abs(first.M1), 1e-300);
      const double d2 = std::abs(s.M2 - first.M2) / std::max(std::abs(first.M2), 1e-300);
      report.mass_drift = std::max({report.mass_drift, d1, d2});
    }
    report.checks.push_back({"mass conservation", report.mass_drift <= 1e-9,
                             "max relative drift " + fmt("%.3e", report.mass_drift)});
  }

  // Growth diagnostics.
  {
    CheckResult check{"growth diagnostics", true, ""};
    try {
      report.growth = growth_diagnostics(samples, options.mode, options.dimension);
      for (const auto& g : report.growth) {
        if (!std::isfinite(g.fitted_constant)) check.pass = false;
      }
      check.detail = report.growth.empty() ? "none apply" : std::to_string(report.growth.size()) + " fitted";
    } catch (const Error& err) {
      check.pass = false;
      check.detail = err.what();
    }
    report.checks.push_back(check);
  }
  return report;
}

std::string format_report(const AnalysisReport& report, const AnalyzeOptions& options) {
  std::ostringstream out;
  out << "mode " << to_string(options.mode) << ", N = " << options.dimension << ", " << report.samples
      << " samples\n";
  for (const auto& c : report.checks) {
    out << (c.pass ? "PASS  " : "FAIL  ") << c.name << ": " << c.detail << '\n';
  }
  for (const auto& g : report.growth) {
    out << "      " << g.label << " / (1+t)^" << fmt("%.4g", g.exponent_target) << ": constant "
        << fmt("%.6g", g.fitted_constant) << ", binding at t = " << fmt("%g", g.max_ratio_time) << '\n';
  }
  out << (report.all_pass() ? "ALL PASS" : "SOME CHECKS FAILED") << '\n';
  return out.str();
}

std::string report_json(const AnalysisReport& report, const AnalyzeOptions& options) {
  using nlohmann::json;
  json j;
  j["mode"] = std::string(to_string(options.mode));
  j["dimension"] = options.dimension;
  j["samples"] = report.samples;
  if (report.fit) {
    j["fit"] = {{"alpha", report.fit->alpha},       {"S1", report.fit->S1},
                {"S2", report.fit->S2},             {"rms_residual", report.fit->rms_residual},
                {"t_first", report.fit->t_first},   {"t_last", report.fit->t_last},
                {"samples_used", report.fit->samples_used}};
  }
  if (report.envelope) j["theoretical_alpha"] = report.envelope->theoretical_alpha;
  if (report.balance) {
    j["balance"] = {{"max_relative_residual", report.balance->max_relative_residual},
                    {"worst_time", report.balance->worst_time}};
  }
  j["monotonicity_violations"] = report.monotonicity_violations;
  j["ckp_violations"] = report.ckp_violations;
  j["bound_violations"] = report.bound_violations;
  j["bound_full"] = report.full_bound;
  if (report.discrete_bound_violations) j["bound_violations_discrete"] = *report.discrete_bound_violations;
  j["mass_drift"] = report.mass_drift;
  json growth = json::array();
  for (const auto& g : report.growth) {
    growth.push_back({{"label", g.label},
                      {"exponent", g.exponent_target},
                      {"constant", g.fitted_constant},
                      {"binding_time", g.max_ratio_time}});
  }
  j["growth"] = growth;
  json checks = json::array();
  for (const auto& c : report.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  j["checks"] = checks;
  j["pass"] = report.all_pass();
  return j.dump(2) + "\n";
}

int cmd_analyze(const std::string& timeseries_path, const AnalyzeOptions& options, std::ostream& out) {
  const auto samples = read_timeseries(timeseries_path);
  std::optional<RunConfig> meta;
  if (!options.meta_path.empty()) {
    meta = load_config(options.meta_path);
  } else {
    const fs::path sibling = fs::path(timeseries_path).parent_path() / kRunMetaFile;
    if (fs::exists(sibling)) meta = load_config(sibling.string());
  }
  const AnalysisReport report = analyze_samples(samples, options, meta);

  fs::path dir = options.report_dir.empty() ? fs::path(timeseries_path).parent_path() : fs::path(options.report_dir);
  if (dir.empty()) dir = ".";
  const std::string text = format_report(report, options);
  write_file((dir / "report.txt").string(), text);
  write_file((dir / "report.json").string(), report_json(report, options));
  out << text;
  return report.all_pass() ? 0 : 1;
}

}  // namespace degrd
