// degrd: run, analyze and verify reaction-diffusion simulations.

#include <iostream>

#include <CLI11.hpp>

#include "degrd/commands.hpp"
#include "degrd/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Reversible reaction a + b <-> c with possibly degenerate diffusion"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run a simulation described by a config file");
  run->add_option("config", config_path, "key = value config file")->required();

  std::string csv_path;
  std::string mode_text;
  degrd::AnalyzeOptions analyze_opts;
  auto* analyze = app.add_subcommand("analyze", "Check a timeseries.csv against the decay and inequality tests");
  analyze->add_option("csv", csv_path, "timeseries.csv written by run")->required();
  analyze->add_option("--mode", mode_text, "diffusivity mode")
      ->required()
      ->check(CLI::IsMember({"full", "db0", "dc0"}));
  analyze->add_option("--dim", analyze_opts.dimension, "space dimension")->required()->check(CLI::Range(1, 3));
  analyze->add_option("--fit-from", analyze_opts.fit_from, "first time used by the envelope fit");
  analyze->add_option("--balance-tol", analyze_opts.balance_tol, "tolerance of the entropy balance audit");
  analyze->add_option("--meta", analyze_opts.meta_path, "run_meta.txt (default: next to the CSV)");
  analyze->add_option("--report-dir", analyze_opts.report_dir, "directory for report.txt and report.json");

  degrd::VerifyOptions verify_opts;
  auto* verify = app.add_subcommand("verify", "Run the built-in property suites");
  verify->add_option("--seed", verify_opts.seed, "random seed of the ensembles");
  verify->add_flag("--inject-fault", verify_opts.inject_dissipation_sign_flip,
                   "negate the reaction part of the dissipation (the suites must fail)")
      ->group("");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return degrd::cmd_run(degrd::load_config(config_path), std::cout);
    if (*analyze) {
      analyze_opts.mode = degrd::parse_mode(mode_text);
      return degrd::cmd_analyze(csv_path, analyze_opts, std::cout);
    }
    if (*verify) return degrd::cmd_verify(verify_opts, std::cout);
  } catch (const degrd::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
