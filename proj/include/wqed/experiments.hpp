#pragma once

// Named experiments that turn an ExperimentConfig into CSV artifacts.
//
//   decay           population.csv, bic.csv (finite nonzero delay), run.txt
//   dressed-scan    scan.csv (value,t,pe,ps), run.txt
//   bic-design      population.csv, bic.csv, run.txt
//   bic-scan        bic_scan.csv over a distance sweep, or bic.csv, run.txt
//   field-map       population.csv, intensity.csv, norm.csv, run.txt
//   oracle-compare  oracle.csv, oracle_report.txt, run.txt
//
// Every file starts with a header row and floats carry 17 significant digits.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "wqed/config.hpp"

namespace wqed {

struct ExperimentResult {
  std::vector<std::filesystem::path> files;
  /// Derived quantities, also appended to run.txt.
  std::vector<std::pair<std::string, std::string>> summary;
};

/// Runs cfg.experiment and writes its files into cfg.out_dir. Throws
/// ValidationError or NumericalError from the underlying modules.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Maps an exception to the process exit code: 1 for validation errors,
/// 2 for numerical failures and anything else.
int exit_code_for(const std::exception& error);

}  // namespace wqed
