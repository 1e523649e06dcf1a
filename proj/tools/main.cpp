// wqed: run named emitter-mirror experiments and write CSV artifacts.
//
//   wqed run --experiment decay --config decay.cfg --omega-rabi 0.5 --out out/
//   wqed presets list

#include <algorithm>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wqed/config.hpp"
#include "wqed/error.hpp"
#include "wqed/experiments.hpp"

namespace {

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

/// Turns leftover "--key value" and "--key=value" tokens into overrides.
wqed::RawConfig parse_overrides(const std::vector<std::string>& extras) {
  wqed::RawConfig out;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& token = extras[i];
    if (token.rfind("--", 0) != 0 || token.size() <= 2) {
      throw wqed::ValidationError("unexpected argument '" + token + "'");
    }
    const std::string body = token.substr(2);
    const auto eq = body.find('=');
    if (eq != std::string::npos) {
      out[normalize_key(body.substr(0, eq))] = body.substr(eq + 1);
      continue;
    }
    if (i + 1 >= extras.size()) {
      throw wqed::ValidationError("missing value for --" + body);
    }
    out[normalize_key(body)] = extras[++i];
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Emitter in front of a mirror: delayed-feedback dynamics"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a named experiment");
  run->allow_extras();
  std::string experiment;
  std::string config_path;
  std::string preset;
  std::string out_dir;
  run->add_option("--experiment", experiment, "Experiment name");
  run->add_option("--config", config_path, "key=value configuration file")
      ->check(CLI::ExistingFile);
  run->add_option("--preset", preset, "Built-in configuration");
  run->add_option("--out", out_dir, "Output directory");

  auto* presets = app.add_subcommand("presets", "Built-in configurations");
  presets->require_subcommand(1);
  auto* list = presets->add_subcommand("list", "List preset names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (list->parsed()) {
    for (const auto& [name, raw] : wqed::presets()) {
      std::cout << name << '\t' << raw.at("experiment") << '\n';
    }
    return 0;
  }

  try {
    wqed::RawConfig overrides = parse_overrides(run->remaining());
    if (!experiment.empty()) overrides["experiment"] = experiment;
    if (!preset.empty()) overrides["preset"] = preset;
    if (!out_dir.empty()) overrides["out"] = out_dir;
    std::optional<std::filesystem::path> file;
    if (!config_path.empty()) file = config_path;
    const wqed::ExperimentConfig cfg = wqed::load_config(file, overrides);
    const wqed::ExperimentResult result = wqed::run_experiment(cfg);
    for (const auto& path : result.files) std::cout << path.string() << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return wqed::exit_code_for(e);
  }
}
