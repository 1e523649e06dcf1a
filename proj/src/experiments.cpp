#include "wqed/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <system_error>

#include "wqed/bic.hpp"
#include "wqed/dynamics.hpp"
#include "wqed/error.hpp"
#include "wqed/field.hpp"
#include "wqed/mode_oracle.hpp"

namespace wqed {

namespace {

namespace fs = std::filesystem;

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::string& header) : out_(path) {
    if (!out_) throw ValidationError("cannot write " + path.string());
    out_ << header << '\n';
  }

  CsvWriter& num(double v) {
    sep();
    out_ << format_double(v);
    return *this;
  }
  CsvWriter& text(const std::string& s) {
    sep();
    out_ << s;
    return *this;
  }
  void end() {
    out_ << '\n';
    first_ = true;
  }

 private:
  void sep() {
    if (!first_) out_ << ',';
    first_ = false;
  }

  std::ofstream out_;
  bool first_ = true;
};

std::string optional_index(const std::optional<long long>& n) {
  return n ? std::to_string(*n) : std::string();
}

void prepare_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw ValidationError("output directory not writable: " + dir.string());
  }
}

fs::path write_population(const ExperimentConfig& cfg, const EmissionRun& run) {
  const fs::path path = cfg.out_dir / "population.csv";
  CsvWriter csv(path, "t,re_ce,im_ce,re_cs,im_cs,pe,ps");
  const auto& times = run.times();
  for (std::size_t i = 0; i < times.size(); ++i) {
    const AmplitudePair a = run.amplitudes_at(times[i], cfg.frame);
    csv.num(times[i]).num(a.upper.real()).num(a.upper.imag());
    csv.num(a.lower.real()).num(a.lower.imag());
    csv.num(run.pe[i]).num(run.ps[i]);
    csv.end();
  }
  return path;
}

void bic_row(CsvWriter& csv, const BicSolution& sol) {
  csv.num(sol.omega_plus).num(sol.omega_minus);
  csv.text(optional_index(sol.n_plus)).text(optional_index(sol.n_minus));
  csv.num(sol.residue_plus.real()).num(sol.residue_plus.imag());
  csv.num(sol.residue_minus.real()).num(sol.residue_minus.imag());
  csv.end();
}

constexpr const char* kBicHeader =
    "omega_plus,omega_minus,n_plus,n_minus,re_res_plus,im_res_plus,"
    "re_res_minus,im_res_minus";

fs::path write_bic(const ExperimentConfig& cfg, const BicSolution& sol) {
  const fs::path path = cfg.out_dir / "bic.csv";
  CsvWriter csv(path, kBicHeader);
  bic_row(csv, sol);
  return path;
}

bool has_cavity(const SystemParams& p) {
  return std::isfinite(p.tau()) && p.tau() > 0.0 && p.omega_rabi > 0.0;
}

void add_bic_summary(ExperimentResult& res, const BicSolution& sol) {
  res.summary.emplace_back("has_plus", sol.has_plus ? "1" : "0");
  res.summary.emplace_back("has_minus", sol.has_minus ? "1" : "0");
  res.summary.emplace_back("phase_plus", format_double(sol.phase_plus));
  res.summary.emplace_back("phase_minus", format_double(sol.phase_minus));
}

EmissionRun simulate(const ExperimentConfig& cfg, const SystemParams& p) {
  return simulate_emission(p, cfg.initial, cfg.t_end, cfg.step, cfg.frame);
}

void run_decay(const ExperimentConfig& cfg, ExperimentResult& res) {
  const EmissionRun run = simulate(cfg, cfg.params);
  res.files.push_back(write_population(cfg, run));
  if (has_cavity(cfg.params)) {
    const BicSolution sol =
        bic_frequencies(cfg.params, kDetectionPhaseTolerance, cfg.initial);
    res.files.push_back(write_bic(cfg, sol));
    add_bic_summary(res, sol);
  }
}

void run_dressed_scan(const ExperimentConfig& cfg, ExperimentResult& res) {
  const fs::path path = cfg.out_dir / "scan.csv";
  CsvWriter csv(path, "value,t,pe,ps");
  for (double value : cfg.scan_values) {
    SystemParams p = cfg.params;
    if (cfg.scan_param == "omega_rabi") {
      p.omega_rabi = value;
    } else {
      p.delta = value;
    }
    p.validate();
    double h = default_step(p);
    if (p.tau() <= cfg.t_end) h = snap_step(h, p.tau());
    const EmissionRun run = simulate_emission(p, cfg.initial, cfg.t_end, h, cfg.frame);
    const auto& times = run.times();
    for (std::size_t i = 0; i < times.size(); ++i) {
      csv.num(value).num(times[i]).num(run.pe[i]).num(run.ps[i]);
      csv.end();
    }
  }
  res.files.push_back(path);
}

void run_bic_design(const ExperimentConfig& cfg, ExperimentResult& res) {
  const BicSolution sol =
      bic_frequencies(cfg.params, kDesignPhaseTolerance, cfg.initial);
  res.files.push_back(write_bic(cfg, sol));
  add_bic_summary(res, sol);
  const EmissionRun run = simulate(cfg, cfg.params);
  res.files.push_back(write_population(cfg, run));
}

void run_bic_scan(const ExperimentConfig& cfg, ExperimentResult& res) {
  if (cfg.d_points == 0) {
    const BicSolution sol =
        bic_frequencies(cfg.params, cfg.scan_tolerance, cfg.initial);
    res.files.push_back(write_bic(cfg, sol));
    add_bic_summary(res, sol);
    return;
  }
  const fs::path path = cfg.out_dir / "bic_scan.csv";
  CsvWriter csv(path, std::string("distance,tau,phase_plus,phase_minus,") + kBicHeader);
  std::size_t found = 0;
  for (std::size_t i = 0; i < cfg.d_points; ++i) {
    SystemParams p = cfg.params;
    const double frac = cfg.d_points == 1
                            ? 0.0
                            : static_cast<double>(i) / static_cast<double>(cfg.d_points - 1);
    p.distance = cfg.d_min + (cfg.d_max - cfg.d_min) * frac;
    const BicSolution sol = bic_frequencies(p, cfg.scan_tolerance, cfg.initial);
    if (sol.has_plus || sol.has_minus) ++found;
    csv.num(p.distance).num(p.tau()).num(sol.phase_plus).num(sol.phase_minus);
    bic_row(csv, sol);
  }
  res.files.push_back(path);
  res.summary.emplace_back("bic_geometries", std::to_string(found));
}

void run_field_map(const ExperimentConfig& cfg, ExperimentResult& res) {
  const SystemParams& p = cfg.params;
  const EmissionRun run = simulate(cfg, p);
  res.files.push_back(write_population(cfg, run));

  const FieldGrid grid = intensity_map(run, cfg.x_max, cfg.nx, 0.0, cfg.t_end, cfg.nt);
  const fs::path ipath = cfg.out_dir / "intensity.csv";
  {
    CsvWriter csv(ipath, "t,x,intensity");
    for (std::size_t it = 0; it < grid.nt(); ++it) {
      for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
        csv.num(grid.t[it]).num(grid.x[ix]).num(grid.intensity_at(it, ix));
        csv.end();
      }
    }
  }
  res.files.push_back(ipath);

  double mirror_ratio = 0.0;
  double outside_max = 0.0;
  for (std::size_t it = 0; it < grid.nt(); ++it) {
    double peak = 0.0;
    for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
      peak = std::max(peak, std::abs(grid.psi_at(it, ix)));
      if (grid.x[ix] > p.velocity * grid.t[it] + p.distance) {
        outside_max = std::max(outside_max, grid.intensity_at(it, ix));
      }
    }
    if (peak > 0.0) {
      mirror_ratio = std::max(mirror_ratio, std::abs(grid.psi_at(it, 0)) / peak);
    }
  }
  res.summary.emplace_back("max_mirror_ratio", format_double(mirror_ratio));
  res.summary.emplace_back("max_intensity_outside_light_cone",
                           format_double(outside_max));

  const fs::path npath = cfg.out_dir / "norm.csv";
  {
    CsvWriter csv(npath, "t,pe,ps,photon_norm,total");
    const double dx = kTwoPi * p.velocity / p.omega_e / 20.0;
    double worst = 0.0;
    for (std::size_t j = 1; j <= cfg.norm_points; ++j) {
      const double t = cfg.t_end * static_cast<double>(j) /
                       static_cast<double>(cfg.norm_points);
      const double x_end = p.velocity * t + p.distance + dx;
      const auto nodes = static_cast<std::size_t>(std::ceil(x_end / dx)) + 1;
      const double photons = photon_norm(run, t, x_end, nodes);
      const AmplitudePair a = run.amplitudes_at(t, Frame::bare);
      const double pe = std::norm(a.upper);
      const double ps = std::norm(a.lower);
      const double total = pe + ps + photons;
      worst = std::max(worst, std::abs(total - cfg.initial.population()));
      csv.num(t).num(pe).num(ps).num(photons).num(total);
      csv.end();
    }
    res.summary.emplace_back("max_norm_defect", format_double(worst));
  }
  res.files.push_back(npath);
}

void run_oracle_compare(const ExperimentConfig& cfg, ExperimentResult& res) {
  const SystemParams& p = cfg.params;
  const EmissionRun dde = simulate_emission(p, cfg.initial, cfg.t_end, cfg.step,
                                            Frame::rotated);
  const ModeGrid grid = build_mode_grid(p, cfg.bandwidth, cfg.n_modes, cfg.t_end);
  const double h_modes = std::min(cfg.step, 0.5 / cfg.bandwidth);
  const ModeRun modes = integrate_modes(p, grid, cfg.initial, cfg.t_end, h_modes);

  const fs::path path = cfg.out_dir / "oracle.csv";
  double max_diff = 0.0;
  double t_max_diff = 0.0;
  {
    CsvWriter csv(path, "t,pe_oracle,pe_dde,abs_diff,oracle_norm");
    for (std::size_t i = 0; i < modes.times.size(); ++i) {
      const double t = std::min(modes.times[i], dde.end_time());
      const double pe_dde = std::norm(dde.amplitudes_at(t, Frame::rotated).upper);
      const double diff = std::abs(modes.pe(i) - pe_dde);
      if (diff > max_diff) {
        max_diff = diff;
        t_max_diff = t;
      }
      csv.num(modes.times[i]).num(modes.pe(i)).num(pe_dde).num(diff).num(modes.norm[i]);
      csv.end();
    }
  }
  res.files.push_back(path);

  const fs::path report = cfg.out_dir / "oracle_report.txt";
  std::ofstream out(report);
  if (!out) throw ValidationError("cannot write " + report.string());
  out << "# key=value\n";
  out << "n_modes=" << grid.size() << '\n';
  out << "bandwidth=" << format_double(cfg.bandwidth) << '\n';
  out << "dk=" << format_double(grid.dk) << '\n';
  out << "recurrence_time=" << format_double(grid.recurrence_time()) << '\n';
  out << "oracle_step=" << format_double(h_modes) << '\n';
  out << "dde_step=" << format_double(dde.trajectory.step()) << '\n';
  out << "max_norm_drift=" << format_double(modes.max_norm_drift) << '\n';
  out << "t_at_max_abs_diff=" << format_double(t_max_diff) << '\n';
  out << "max_abs_diff=" << format_double(max_diff) << '\n';
  res.files.push_back(report);
  res.summary.emplace_back("max_norm_drift", format_double(modes.max_norm_drift));
  res.summary.emplace_back("max_abs_diff", format_double(max_diff));
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  prepare_out_dir(cfg.out_dir);
  ExperimentResult res;
  const std::string& ex = cfg.experiment;
  if (ex == "decay") {
    run_decay(cfg, res);
  } else if (ex == "dressed-scan") {
    run_dressed_scan(cfg, res);
  } else if (ex == "bic-design") {
    run_bic_design(cfg, res);
  } else if (ex == "bic-scan") {
    run_bic_scan(cfg, res);
  } else if (ex == "field-map") {
    run_field_map(cfg, res);
  } else if (ex == "oracle-compare") {
    run_oracle_compare(cfg, res);
  } else {
    throw ValidationError("unknown experiment '" + ex + "'");
  }

  const fs::path meta = cfg.out_dir / "run.txt";
  std::ofstream out(meta);
  if (!out) throw ValidationError("cannot write " + meta.string());
  out << "# key=value\n";
  for (const auto& [key, value] : cfg.metadata) out << key << '=' << value << '\n';
  for (const auto& [key, value] : res.summary) out << key << '=' << value << '\n';
  res.files.push_back(meta);
  return res;
}

int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const ValidationError*>(&error) != nullptr) return 1;
  return 2;
}

}  // namespace wqed
