#include "wqed/mode_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wqed/error.hpp"

namespace wqed {

namespace {
constexpr cplx kI{0.0, 1.0};
}

double default_bandwidth(const SystemParams& p) {
  return 50.0 * p.gamma + 5.0 * p.omega_rabi;
}

ModeGrid build_mode_grid(const SystemParams& p, double bandwidth,
                         std::size_t n_modes, double t_end) {
  p.validate();
  if (n_modes < 2) throw ValidationError("n_modes must be >= 2");
  if (!(bandwidth > 0.0)) throw ValidationError("bandwidth must be > 0");
  const double v = p.velocity;
  const double k_hi = (p.omega_e + bandwidth) / v;
  const double k_lo = std::max(0.0, p.omega_e - bandwidth) / v;
  if (!(k_hi > k_lo)) throw ValidationError("mode band is empty");

  ModeGrid g;
  g.velocity = v;
  const bool floored = k_lo == 0.0;
  g.dk = floored ? k_hi / static_cast<double>(n_modes)
                 : (k_hi - k_lo) / static_cast<double>(n_modes - 1);
  if (!(g.recurrence_time() > 2.0 * t_end)) {
    std::ostringstream msg;
    msg << "increase n_modes: recurrence time " << g.recurrence_time()
        << " does not exceed 2*t_end = " << 2.0 * t_end;
    throw ValidationError(msg.str());
  }

  const double g0 = std::sqrt(p.gamma * v / kPi);
  g.k.resize(n_modes);
  g.coupling.resize(n_modes);
  g.frequency.resize(n_modes);
  for (std::size_t j = 0; j < n_modes; ++j) {
    const double index = static_cast<double>(floored ? j + 1 : j);
    const double k = floored ? g.dk * index : k_lo + g.dk * index;
    g.k[j] = k;
    g.coupling[j] = g0 * std::sin(k * p.distance);
    g.frequency[j] = v * k;
  }
  return g;
}

double FullState::norm(double dk) const {
  double photons = 0.0;
  for (const cplx& b : beta) photons += std::norm(b);
  return std::norm(c_e) + std::norm(c_s) + photons * dk;
}

namespace {

/// Interaction-picture state: y = {C~_e, C~_s, beta~_0, ...}.
struct ModeSystem {
  const ModeGrid& grid;
  double omega_rabi;
  double delta;

  void rhs(std::span<const cplx> phasor, std::span<const cplx> y,
           std::span<cplx> dy) const {
    const std::size_t n = grid.size();
    const cplx ce = y[0];
    const cplx cs = y[1];
    cplx overlap{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) {
      overlap += grid.coupling[j] * y[j + 2] * std::conj(phasor[j]);
    }
    dy[0] = -kI * omega_rabi * cs - kI * overlap * grid.dk;
    dy[1] = kI * delta * cs - kI * omega_rabi * ce;
    const cplx drive = -kI * ce;
    for (std::size_t j = 0; j < n; ++j) {
      dy[j + 2] = drive * grid.coupling[j] * phasor[j];
    }
  }
};

double state_norm(std::span<const cplx> y, double dk) {
  double photons = 0.0;
  for (std::size_t j = 2; j < y.size(); ++j) photons += std::norm(y[j]);
  return std::norm(y[0]) + std::norm(y[1]) + photons * dk;
}

FullState to_bare(const SystemParams& p, const ModeGrid& grid,
                  std::span<const cplx> y, double t) {
  FullState s;
  s.t = t;
  const cplx carrier = std::polar(1.0, -p.omega_e * t);
  s.c_e = y[0] * carrier;
  s.c_s = y[1] * carrier;
  s.beta.resize(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    s.beta[j] = y[j + 2] * std::polar(1.0, -grid.frequency[j] * t);
  }
  return s;
}

}  // namespace

ModeRun integrate_modes(const SystemParams& p, const ModeGrid& grid,
                        const AmplitudePair& init, double t_end, double h,
                        std::span<const double> snapshot_times,
                        const ModeOptions& options) {
  p.validate();
  if (!(h > 0.0)) throw ValidationError("step must be > 0");
  if (!(t_end > 0.0)) throw ValidationError("t_end must be > 0");
  if (grid.size() == 0) throw ValidationError("empty mode grid");
  const AmplitudePair a0 = frame_transform(init, 0.0, p, Frame::bare);

  const std::size_t n = grid.size();
  const std::size_t dim = n + 2;
  const auto n_steps = static_cast<std::size_t>(std::ceil(t_end / h - 1e-9));

  std::vector<std::size_t> snapshot_steps;
  for (double ts : snapshot_times) {
    if (!(ts >= 0.0)) throw ValidationError("snapshot time must be >= 0");
    snapshot_steps.push_back(std::min(
        n_steps, static_cast<std::size_t>(std::llround(ts / h))));
  }

  const ModeSystem sys{grid, p.omega_rabi, p.delta};
  std::vector<double> detuning(n);
  std::vector<cplx> half_turn(n);
  for (std::size_t j = 0; j < n; ++j) {
    detuning[j] = grid.frequency[j] - p.omega_e;
    half_turn[j] = std::polar(1.0, 0.5 * h * detuning[j]);
  }

  std::vector<cplx> y(dim, cplx{0.0, 0.0});
  y[0] = a0.upper;
  y[1] = a0.lower;
  std::vector<cplx> k1(dim), k2(dim), k3(dim), k4(dim), stage(dim);
  std::vector<cplx> ph0(n), ph_mid(n), ph1(n);

  ModeRun run;
  run.times.reserve(n_steps + 1);
  run.c_e.reserve(n_steps + 1);
  run.c_s.reserve(n_steps + 1);
  run.norm.reserve(n_steps + 1);

  auto record = [&](std::size_t step) {
    const double t = static_cast<double>(step) * h;
    const cplx carrier = std::polar(1.0, -p.omega_e * t);
    const double nrm = state_norm(y, grid.dk);
    run.times.push_back(t);
    run.c_e.push_back(y[0] * carrier);
    run.c_s.push_back(y[1] * carrier);
    run.norm.push_back(nrm);
    const double drift = std::abs(nrm - a0.population());
    run.max_norm_drift = std::max(run.max_norm_drift, drift);
    for (std::size_t s : snapshot_steps) {
      if (s == step) run.snapshots.push_back(to_bare(p, grid, y, t));
    }
    if (drift > options.max_norm_drift) {
      std::ostringstream msg;
      msg << "step too large: norm drift " << drift
          << " at t=" << t;
      throw NumericalError(msg.str());
    }
  };

  record(0);
  for (std::size_t i = 0; i < n_steps; ++i) {
    const double t = static_cast<double>(i) * h;
    // Exact phasors at the step start; mid and end by rotation.
    for (std::size_t j = 0; j < n; ++j) {
      ph0[j] = std::polar(1.0, detuning[j] * t);
      ph_mid[j] = ph0[j] * half_turn[j];
      ph1[j] = ph_mid[j] * half_turn[j];
    }
    sys.rhs(ph0, y, k1);
    for (std::size_t c = 0; c < dim; ++c) stage[c] = y[c] + 0.5 * h * k1[c];
    sys.rhs(ph_mid, stage, k2);
    for (std::size_t c = 0; c < dim; ++c) stage[c] = y[c] + 0.5 * h * k2[c];
    sys.rhs(ph_mid, stage, k3);
    for (std::size_t c = 0; c < dim; ++c) stage[c] = y[c] + h * k3[c];
    sys.rhs(ph1, stage, k4);
    for (std::size_t c = 0; c < dim; ++c) {
      y[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
    }
    record(i + 1);
  }
  return run;
}

cplx reconstruct_field_from_modes(const FullState& state, const ModeGrid& grid,
                                  double x) {
  if (!(x >= 0.0)) throw ValidationError("x must be >= 0");
  cplx sum{0.0, 0.0};
  for (std::size_t j = 0; j < grid.size(); ++j) {
    sum += state.beta[j] * std::sin(grid.k[j] * x);
  }
  return std::sqrt(2.0 / kPi) * grid.dk * sum;
}

}  // namespace wqed
