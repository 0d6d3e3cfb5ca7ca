// mortar-dg <experiment> --config <path> [--out <dir>] [--threads k]
#include "mortar_dg/experiment.hpp"

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Nonconforming DG spectral-element elastodynamics experiments"};
  std::string kind, config_path, out_dir;
  int threads = 0;
  app.add_option("experiment", kind,
                 "convergence | stability | longtime | conserve | constant | divcheck")
      ->required();
  app.add_option("--config", config_path, "JSON experiment configuration")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory (default: the config's \"output\")");
  app.add_option("--threads", threads, "OpenMP threads (default: runtime setting)")->check(CLI::NonNegativeNumber);
  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif

  mdg::ExperimentConfig cfg;
  try {
    cfg = mdg::ExperimentConfig::load(config_path);
    if (mdg::parse_experiment_kind(kind) != cfg.kind)
      throw std::invalid_argument("command '" + kind + "' does not match the config's experiment '" +
                                  mdg::experiment_kind_name(cfg.kind) + "'");
  } catch (const std::exception& e) {
    std::cerr << "mortar-dg: " << e.what() << '\n';
    return 1;
  }
  if (!out_dir.empty()) cfg.output = out_dir;

  mdg::RunReport report;
  try {
    report = mdg::run_experiment(cfg);
    mdg::write_report(report, cfg.output);
  } catch (const std::exception& e) {
    std::cerr << "mortar-dg: " << e.what() << '\n';
    return 1;
  }
  std::cout << report.summary.dump(2) << '\n';
  if (report.diverged) {
    std::cerr << "mortar-dg: diverged at t = " << report.failure_time << ": " << report.message << '\n';
    return 2;
  }
  for (const auto& v : report.violations) std::cerr << "mortar-dg: invariant violated: " << v << '\n';
  return report.violations.empty() ? 0 : 3;
}
