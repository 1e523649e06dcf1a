#pragma once

// Flat key=value experiment configuration.
//
//   # comment
//   experiment = decay
//   omega_rabi = 0
//   distance = 1e9
//
// Precedence: preset < file < command-line overrides < experiment defaults
// (the defaults only fill keys that are still unset).

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wqed/model.hpp"

namespace wqed {

using RawConfig = std::map<std::string, std::string>;

/// Names accepted by run --experiment.
const std::vector<std::string>& experiment_names();
/// Every key understood by load_config, in documentation order.
const std::vector<std::string>& config_keys();

struct ExperimentConfig {
  std::string experiment = "decay";
  std::string preset;
  SystemParams params;
  AmplitudePair initial;  // bare frame
  Frame frame = Frame::rotated;
  double t_end = 10.0;
  double step = 0.0;  // resolved; > 0 after load_config

  // field-map
  double x_max = 0.0;
  std::size_t nx = 0;
  std::size_t nt = 200;
  std::size_t norm_points = 5;

  // oracle-compare
  std::size_t n_modes = 4001;
  double bandwidth = 0.0;

  // bic-design
  long long design_m = 10;
  long long design_k = 1;

  // bic-scan
  double scan_tolerance = 0.0;
  double d_min = 0.0;
  double d_max = 0.0;
  std::size_t d_points = 0;

  // dressed-scan
  std::string scan_param = "omega_rabi";
  std::vector<double> scan_values;

  std::filesystem::path out_dir = ".";

  /// Resolved key/value pairs, written to run.txt.
  std::vector<std::pair<std::string, std::string>> metadata;
};

/// Parses key=value text. Throws ValidationError for malformed lines or
/// unknown keys (the message lists the valid keys).
RawConfig parse_config_text(std::string_view text);
RawConfig read_config_file(const std::filesystem::path& path);

/// Named built-in configurations.
const std::map<std::string, RawConfig>& presets();

/// Merges preset (named by a "preset" key in file or overrides), file and
/// overrides, applies experiment defaults, and validates.
ExperimentConfig load_config(const std::optional<std::filesystem::path>& file,
                             const RawConfig& overrides);
ExperimentConfig load_config(const RawConfig& merged);

/// Drive that puts omega_+ = omega_e + Omega on a commensurate frequency
/// 2 pi n / tau at delta = 0, choosing n so Omega is closest to `target`.
double single_bic_drive(double omega_e, double tau, double target);

/// Formats with 17 significant digits.
std::string format_double(double value);

}  // namespace wqed
