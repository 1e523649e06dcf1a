#include "wqed/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "wqed/bic.hpp"
#include "wqed/dynamics.hpp"
#include "wqed/error.hpp"
#include "wqed/field.hpp"

namespace wqed {

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "decay", "dressed-scan", "bic-design", "bic-scan", "field-map",
      "oracle-compare"};
  return names;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "experiment", "preset",    "gamma",      "omega_rabi",  "omega_e",
      "delta",      "distance",  "velocity",   "ce_re",       "ce_im",
      "cs_re",      "cs_im",     "frame",      "t_end",       "step",
      "x_max",      "nx",        "nt",         "norm_points", "n_modes",
      "bandwidth",  "m",         "k",          "scan_tolerance",
      "d_min",      "d_max",     "d_points",   "scan_param",  "scan_values",
      "out"};
  return keys;
}

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ", ";
    out += s;
  }
  return out;
}

void check_key(const std::string& key) {
  const auto& keys = config_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
    throw ValidationError("unknown key '" + key + "'; valid keys: " + join(keys));
  }
}

double to_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) {
    throw ValidationError("invalid number for " + key + ": '" + value + "'");
  }
  return out;
}

long long to_integer(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  long long out = 0;
  try {
    out = std::stoll(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) {
    throw ValidationError("invalid integer for " + key + ": '" + value + "'");
  }
  return out;
}

std::size_t to_count(const std::string& key, const std::string& value) {
  const long long v = to_integer(key, value);
  if (v < 0) throw ValidationError(key + " must be >= 0");
  return static_cast<std::size_t>(v);
}

std::vector<double> to_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  return out;
}

std::string list_text(const std::vector<double>& values) {
  std::string out;
  for (double v : values) {
    if (!out.empty()) out += ",";
    out += format_double(v);
  }
  return out;
}

RawConfig fig3_panel(double omega_rabi, double distance, double t_end) {
  return {{"experiment", "decay"},
          {"omega_rabi", format_double(omega_rabi)},
          {"distance", format_double(distance)},
          {"delta", "0"},
          {"omega_e", "100"},
          {"t_end", format_double(t_end)}};
}

RawConfig fig3_single_bic_panel(double distance, double t_end) {
  RawConfig c = fig3_panel(single_bic_drive(100.0, 2.0 * distance, 10.0),
                           distance, t_end);
  return c;
}

}  // namespace

double single_bic_drive(double omega_e, double tau, double target) {
  if (!(tau > 0.0)) throw ValidationError("single_bic_drive requires tau > 0");
  double n = std::round((omega_e + target) * tau / kTwoPi);
  double drive = kTwoPi * n / tau - omega_e;
  while (drive <= 0.0) {
    n += 1.0;
    drive = kTwoPi * n / tau - omega_e;
  }
  return drive;
}

RawConfig parse_config_text(std::string_view text) {
  RawConfig out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("line " + std::to_string(line_no) +
                            ": expected key=value");
    }
    std::string key = trim(std::string_view(body).substr(0, eq));
    std::string value = trim(std::string_view(body).substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    check_key(key);
    out[key] = value;
  }
  return out;
}

RawConfig read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

const std::map<std::string, RawConfig>& presets() {
  static const std::map<std::string, RawConfig> table = [] {
    std::map<std::string, RawConfig> t;
    t["decay"] = {{"experiment", "decay"}, {"omega_rabi", "0"},
                  {"distance", "1e9"}, {"t_end", "10"}};
    t["fig2a"] = {{"experiment", "dressed-scan"}, {"scan_param", "omega_rabi"},
                  {"scan_values", "0,0.1,0.25,0.5,1"}, {"delta", "0"},
                  {"distance", "1e9"}, {"t_end", "10"}};
    t["fig2b"] = {{"experiment", "dressed-scan"}, {"scan_param", "delta"},
                  {"scan_values", "0,1,2,4"}, {"omega_rabi", "0.5"},
                  {"distance", "1e9"}, {"t_end", "10"}};
    t["fig3a"] = fig3_panel(0.0, 0.316, 20.0);
    t["fig3b"] = fig3_single_bic_panel(0.315, 20.0);
    t["fig3c"] = {{"experiment", "bic-design"}, {"omega_rabi", "10"},
                  {"delta", "0"}, {"m", "10"}, {"k", "1"}, {"t_end", "20"}};
    t["fig3d"] = fig3_panel(0.0, 0.94, 20.0);
    t["fig3e"] = fig3_single_bic_panel(0.94, 20.0);
    t["fig3f"] = fig3_panel(10.0, 0.94, 20.0);
    t["fig3g"] = fig3_panel(0.0, 18.0, 100.0);
    t["fig3h"] = fig3_single_bic_panel(18.0, 100.0);
    t["fig3i"] = fig3_panel(10.0, 18.0, 100.0);
    t["fig4a"] = fig3_panel(10.0, 0.94, 20.0);
    t["fig4a"]["experiment"] = "field-map";
    t["fig4a"]["x_max"] = "4";
    t["fig4b"] = fig3_panel(10.0, 18.0, 100.0);
    t["fig4b"]["experiment"] = "field-map";
    t["fig4b"]["x_max"] = "60";
    t["fig4b"]["nx"] = "4000";
    t["oracle-3d"] = {{"experiment", "oracle-compare"}, {"omega_rabi", "0"},
                      {"distance", "0.94"}, {"t_end", "10"}};
    t["oracle-3f"] = {{"experiment", "oracle-compare"}, {"omega_rabi", "10"},
                      {"distance", "0.94"}, {"t_end", "10"}};
    return t;
  }();
  return table;
}

ExperimentConfig load_config(const std::optional<std::filesystem::path>& file,
                             const RawConfig& overrides) {
  RawConfig from_file;
  if (file) from_file = read_config_file(*file);
  for (const auto& [key, value] : overrides) check_key(key);

  std::string preset;
  if (auto it = from_file.find("preset"); it != from_file.end()) preset = it->second;
  if (auto it = overrides.find("preset"); it != overrides.end()) preset = it->second;

  RawConfig merged;
  if (!preset.empty()) {
    const auto it = presets().find(preset);
    if (it == presets().end()) throw ValidationError("unknown preset '" + preset + "'");
    merged = it->second;
    merged["preset"] = preset;
  }
  for (const auto& [key, value] : from_file) merged[key] = value;
  for (const auto& [key, value] : overrides) merged[key] = value;
  return load_config(merged);
}

ExperimentConfig load_config(const RawConfig& merged) {
  for (const auto& [key, value] : merged) check_key(key);
  auto has = [&](const char* key) { return merged.count(key) > 0; };
  auto get = [&](const char* key) -> const std::string& { return merged.at(key); };
  auto num = [&](const char* key, double fallback) {
    return has(key) ? to_double(key, get(key)) : fallback;
  };

  ExperimentConfig cfg;
  if (has("experiment")) cfg.experiment = get("experiment");
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), cfg.experiment) == names.end()) {
    throw ValidationError("unknown experiment '" + cfg.experiment +
                          "'; valid experiments: " + join(names));
  }
  if (has("preset")) cfg.preset = get("preset");
  const std::string& ex = cfg.experiment;
  const bool design = ex == "bic-design";
  const bool oracle = ex == "oracle-compare";

  SystemParams& p = cfg.params;
  p.gamma = num("gamma", 1.0);
  p.velocity = num("velocity", 1.0);
  p.delta = num("delta", 0.0);
  p.omega_rabi = num("omega_rabi", design ? 10.0 : 0.0);
  // The wide band needs omega_e well above the bandwidth (k > 0 modes only).
  p.omega_e = num("omega_e", oracle ? 1000.0 : 100.0);
  const double default_distance = ex == "dressed-scan" ? 1e9 : 0.94;
  p.distance = num("distance", default_distance);

  cfg.initial = {cplx{num("ce_re", 1.0), num("ce_im", 0.0)},
                 cplx{num("cs_re", 0.0), num("cs_im", 0.0)}, Frame::bare};
  if (has("frame")) cfg.frame = parse_frame(get("frame"));
  cfg.t_end = num("t_end", design ? 40.0 : 10.0);
  if (!(cfg.t_end > 0.0) || !std::isfinite(cfg.t_end)) {
    throw ValidationError("t_end must be > 0");
  }
  if (cfg.initial.population() > 1.0 + 1e-9) {
    throw ValidationError("initial amplitudes (ce_*, cs_*) must have norm <= 1");
  }

  if (has("m")) cfg.design_m = to_integer("m", get("m"));
  if (has("k")) cfg.design_k = to_integer("k", get("k"));
  if (design) {
    p.validate();
    const SystemParams designed = design_bic_geometry(
        p.gamma, p.omega_rabi, p.delta, cfg.design_m, cfg.design_k, p.velocity);
    p.omega_e = designed.omega_e;
    p.distance = designed.distance;
  }
  p.validate();

  if (has("step")) {
    cfg.step = to_double("step", get("step"));
    if (!(cfg.step > 0.0)) throw ValidationError("step must be > 0");
  } else {
    cfg.step = default_step(p);
  }
  if (p.tau() <= cfg.t_end) cfg.step = snap_step(cfg.step, p.tau());

  const double lc = p.coherence_length();
  cfg.x_max = num("x_max", 2.0 * p.distance + 2.0 * lc);
  if (!(cfg.x_max > p.distance)) throw ValidationError("x_max must exceed distance");
  if (has("nx")) {
    cfg.nx = to_count("nx", get("nx"));
  } else {
    cfg.nx = static_cast<std::size_t>(std::ceil(cfg.x_max / default_spatial_step(p))) + 1;
  }
  if (has("nt")) cfg.nt = to_count("nt", get("nt"));
  if (cfg.nx < 2) throw ValidationError("nx must be >= 2");
  if (cfg.nt < 2) throw ValidationError("nt must be >= 2");
  if (has("norm_points")) cfg.norm_points = to_count("norm_points", get("norm_points"));

  if (has("n_modes")) cfg.n_modes = to_count("n_modes", get("n_modes"));
  if (cfg.n_modes < 2) throw ValidationError("n_modes must be >= 2");
  cfg.bandwidth = num("bandwidth", oracle ? 500.0 : 50.0 * p.gamma + 5.0 * p.omega_rabi);
  if (!(cfg.bandwidth > 0.0)) throw ValidationError("bandwidth must be > 0");

  cfg.scan_tolerance = num("scan_tolerance", kDetectionPhaseTolerance);
  cfg.d_min = num("d_min", 0.0);
  cfg.d_max = num("d_max", 0.0);
  if (has("d_points")) cfg.d_points = to_count("d_points", get("d_points"));
  if (cfg.d_points > 0 && !(cfg.d_max > cfg.d_min && cfg.d_min > 0.0)) {
    throw ValidationError("bic-scan requires 0 < d_min < d_max");
  }

  if (has("scan_param")) cfg.scan_param = get("scan_param");
  if (cfg.scan_param != "omega_rabi" && cfg.scan_param != "delta") {
    throw ValidationError("scan_param must be omega_rabi or delta");
  }
  if (has("scan_values")) {
    cfg.scan_values = to_list("scan_values", get("scan_values"));
  } else if (cfg.scan_param == "omega_rabi") {
    cfg.scan_values = {0.0, 0.1, 0.25, 0.5, 1.0};
  } else {
    cfg.scan_values = {0.0, 1.0, 2.0, 4.0};
  }
  if (ex == "dressed-scan" && cfg.scan_values.empty()) {
    throw ValidationError("scan_values must not be empty");
  }
  if (has("out")) cfg.out_dir = get("out");

  auto& md = cfg.metadata;
  md = {{"experiment", cfg.experiment},
        {"preset", cfg.preset},
        {"gamma", format_double(p.gamma)},
        {"omega_rabi", format_double(p.omega_rabi)},
        {"omega_e", format_double(p.omega_e)},
        {"omega_s", format_double(p.omega_s())},
        {"delta", format_double(p.delta)},
        {"distance", format_double(p.distance)},
        {"velocity", format_double(p.velocity)},
        {"tau", format_double(p.tau())},
        {"coherence_length", format_double(lc)},
        {"ce_re", format_double(cfg.initial.upper.real())},
        {"ce_im", format_double(cfg.initial.upper.imag())},
        {"cs_re", format_double(cfg.initial.lower.real())},
        {"cs_im", format_double(cfg.initial.lower.imag())},
        {"frame", std::string(to_string(cfg.frame))},
        {"t_end", format_double(cfg.t_end)},
        {"step", format_double(cfg.step)}};
  if (ex == "field-map") {
    md.emplace_back("x_max", format_double(cfg.x_max));
    md.emplace_back("nx", std::to_string(cfg.nx));
    md.emplace_back("nt", std::to_string(cfg.nt));
    md.emplace_back("norm_points", std::to_string(cfg.norm_points));
  }
  if (oracle) {
    md.emplace_back("n_modes", std::to_string(cfg.n_modes));
    md.emplace_back("bandwidth", format_double(cfg.bandwidth));
  }
  if (design) {
    md.emplace_back("m", std::to_string(cfg.design_m));
    md.emplace_back("k", std::to_string(cfg.design_k));
  }
  if (ex == "bic-scan") {
    md.emplace_back("scan_tolerance", format_double(cfg.scan_tolerance));
    md.emplace_back("d_min", format_double(cfg.d_min));
    md.emplace_back("d_max", format_double(cfg.d_max));
    md.emplace_back("d_points", std::to_string(cfg.d_points));
  }
  if (ex == "dressed-scan") {
    md.emplace_back("scan_param", cfg.scan_param);
    md.emplace_back("scan_values", list_text(cfg.scan_values));
  }
  if (cfg.preset == "fig3b" || cfg.preset == "fig3e" || cfg.preset == "fig3h") {
    md.emplace_back("omega_rabi_rule",
                    "omega_e + omega_rabi = 2*pi*n/tau, n chosen so omega_rabi is nearest 10");
  }
  return cfg;
}

}  // namespace wqed
