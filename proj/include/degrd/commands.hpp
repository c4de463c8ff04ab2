#pragma once

// The three batch commands behind the CLI. Each returns a process exit
// status and writes human-readable progress to the given stream.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "degrd/analysis.hpp"
#include "degrd/config.hpp"
#include "degrd/functionals.hpp"

namespace degrd {

inline constexpr const char* kTimeseriesFile = "timeseries.csv";
inline constexpr const char* kFinalFieldsFile = "final_fields.snap";
inline constexpr const char* kRunMetaFile = "run_meta.txt";

/// Runs the configured simulation and writes timeseries.csv,
/// final_fields.snap and run_meta.txt into config.out_dir. run_meta.txt is
/// the canonical config followed by '#' lines with solver statistics, so it
/// parses back as a config. Returns 0 on success and 2 on NumericalBlowup
/// or LinSolveFailure (recorded in run_meta.txt); I/O failures throw.
int cmd_run(const RunConfig& config, std::ostream& log);

struct AnalyzeOptions {
  DiffusionMode mode = DiffusionMode::full;
  int dimension = 1;
  /// Envelope fit uses samples with t >= fit_from.
  double fit_from = 0.0;
  double balance_tol = 0.01;
  /// run_meta.txt of the run; supplies diffusivities, box and steps per
  /// sample for the full dissipation bound. Empty means run_meta.txt next to
  /// the CSV if there is one; with no metadata only the reaction part
  /// 4 ||AB - C||^2 of the bound is checked.
  std::string meta_path;
  /// Where report.txt and report.json go; empty means next to the CSV.
  std::string report_dir;
};

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct AnalysisReport {
  std::size_t samples = 0;
  std::optional<DecayFit> fit;
  std::optional<EnvelopeCheck> envelope;
  std::optional<BalanceAudit> balance;
  std::vector<GrowthDiagnostic> growth;
  std::size_t monotonicity_violations = 0;
  std::size_t ckp_violations = 0;
  std::size_t bound_violations = 0;
  double worst_bound_violation = 0.0;  // relative
  bool full_bound = false;             // false: reaction part only
  /// Violations with the discrete Neumann eigenvalue in place of the analytic
  /// constant; informational, needs run metadata.
  std::optional<std::size_t> discrete_bound_violations;
  double mass_drift = 0.0;
  std::vector<CheckResult> checks;

  bool all_pass() const;
};

AnalysisReport analyze_samples(const std::vector<FunctionalSample>& samples, const AnalyzeOptions& options,
                               const std::optional<RunConfig>& meta = std::nullopt);

std::string format_report(const AnalysisReport& report, const AnalyzeOptions& options);
std::string report_json(const AnalysisReport& report, const AnalyzeOptions& options);

/// Reads the CSV (ParseError on schema problems), writes report.txt and
/// report.json, prints the report; returns 0 iff every check passes.
int cmd_analyze(const std::string& timeseries_path, const AnalyzeOptions& options, std::ostream& out);

struct VerifyOptions {
  std::uint64_t seed = 20260101;
  /// Runs the suites with the reaction term of the dissipation negated.
  bool inject_dissipation_sign_flip = false;
};

struct SuiteResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

std::vector<SuiteResult> run_verify_suites(const VerifyOptions& options);

/// Prints one line per suite and a summary; 0 iff all suites pass.
int cmd_verify(const VerifyOptions& options, std::ostream& out);

}  // namespace degrd
