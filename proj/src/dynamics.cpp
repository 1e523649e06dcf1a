#include "wqed/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "wqed/error.hpp"

namespace wqed {

namespace {

constexpr cplx kI{0.0, 1.0};

DdeRhs bare_rhs(const SystemParams& p) {
  const cplx decay = kI * p.omega_e + 0.5 * p.gamma;
  const cplx drive = kI * p.omega_rabi;
  const cplx free_s = kI * p.omega_s();
  const double feedback = 0.5 * p.gamma;
  return [=](double, std::span<const cplx> z, std::span<const cplx> delayed,
             std::span<cplx> dz) {
    dz[0] = -decay * z[0] - drive * z[1];
    dz[1] = -free_s * z[1] - drive * z[0];
    if (!delayed.empty()) dz[0] += feedback * delayed[0];
  };
}

DdeRhs rotated_rhs(const SystemParams& p) {
  const double half_gamma = 0.5 * p.gamma;
  const cplx drive = kI * p.omega_rabi;
  const cplx detuning = kI * p.delta;
  const cplx feedback = half_gamma * std::polar(1.0, p.omega_e * p.tau());
  return [=](double, std::span<const cplx> z, std::span<const cplx> delayed,
             std::span<cplx> dz) {
    dz[0] = -half_gamma * z[0] - drive * z[1];
    dz[1] = detuning * z[1] - drive * z[0];
    if (!delayed.empty()) dz[0] += feedback * delayed[0];
  };
}

DdeRhs dressed_rhs(const SystemParams& p) {
  const DressedBasis b = dressed_basis(p);
  const double tau = p.tau();
  const double rate_plus =
      p.gamma * (b.delta_big + 0.5 * p.delta) / (4.0 * b.delta_big);
  const double rate_minus =
      p.gamma * (b.delta_big - 0.5 * p.delta) / (4.0 * b.delta_big);
  const double rate_cross = p.omega_rabi * p.gamma / (4.0 * b.delta_big);
  const cplx phase_plus = std::polar(1.0, b.omega_plus * tau);
  const cplx phase_minus = std::polar(1.0, b.omega_minus * tau);
  const double two_delta = 2.0 * b.delta_big;
  return [=](double t, std::span<const cplx> z, std::span<const cplx> delayed,
             std::span<cplx> dz) {
    // Both brackets are [e^{i w tau} c(t - tau) H(t - tau) - c(t)].
    cplx bracket_plus = -z[0];
    cplx bracket_minus = -z[1];
    if (!delayed.empty()) {
      bracket_plus += phase_plus * delayed[0];
      bracket_minus += phase_minus * delayed[1];
    }
    const cplx beat = std::polar(1.0, two_delta * t);
    dz[0] = rate_plus * bracket_plus + rate_cross * beat * bracket_minus;
    dz[1] = rate_minus * bracket_minus + rate_cross * std::conj(beat) * bracket_plus;
  };
}

}  // namespace

DdeRhs emitter_rhs(const SystemParams& p, Frame frame) {
  p.validate();
  switch (frame) {
    case Frame::bare:
      return bare_rhs(p);
    case Frame::rotated:
      return rotated_rhs(p);
    case Frame::dressed:
      return dressed_rhs(p);
  }
  throw ValidationError("unknown frame tag");
}

double default_step(const SystemParams& p) {
  const double delta_big =
      std::sqrt(0.25 * p.delta * p.delta + p.omega_rabi * p.omega_rabi);
  const double tau = p.tau();
  const double inv_tau = tau > 0.0 ? 1.0 / tau : 0.0;
  const double fastest = std::max({p.omega_rabi, delta_big, inv_tau});
  double h = 1e-3 / p.gamma;
  if (fastest > 0.0) h = std::min(h, kTwoPi / (50.0 * fastest));
  return snap_step(h, tau);
}

AmplitudePair EmissionRun::amplitudes_at(double t, Frame target) const {
  cplx z[2];
  trajectory.evaluate_into(t, z);
  return frame_transform({z[0], z[1], frame}, t, params, target);
}

cplx EmissionRun::excited_bare(double t) const {
  if (frame == Frame::rotated) {
    return trajectory.evaluate_component(t, 0) *
           std::polar(1.0, -params.omega_e * t);
  }
  if (frame == Frame::bare) return trajectory.evaluate_component(t, 0);
  return amplitudes_at(t, Frame::bare).upper;
}

EmissionRun simulate_emission(const SystemParams& p, const AmplitudePair& init,
                              double t_end, std::optional<double> h,
                              Frame frame) {
  p.validate();
  const AmplitudePair start = frame_transform(init, 0.0, p, Frame::bare);
  if (start.population() > 1.0 + 1e-9) {
    throw ValidationError("initial state population exceeds 1");
  }
  const AmplitudePair z0 = frame_transform(start, 0.0, p, frame);

  DdeProblem problem;
  problem.dimension = 2;
  problem.rhs = emitter_rhs(p, frame);
  problem.delay = p.tau();
  problem.initial = {z0.upper, z0.lower};

  EmissionRun run;
  run.params = p;
  run.frame = frame;
  run.initial = start;
  run.trajectory = integrate_dde(problem, t_end, h.value_or(default_step(p)));

  const auto& times = run.trajectory.times();
  run.pe.resize(times.size());
  run.ps.resize(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto z = run.trajectory.value(i);
    AmplitudePair a{z[0], z[1], frame};
    if (frame == Frame::dressed) a = frame_transform(a, times[i], p, Frame::rotated);
    run.pe[i] = std::norm(a.upper);
    run.ps[i] = std::norm(a.lower);
  }
  return run;
}

AmplitudePair analytic_reference(const SystemParams& p,
                                 const AmplitudePair& init, double t,
                                 AnalyticVariant variant) {
  p.validate();
  if (!(t >= 0.0)) throw ValidationError("analytic_reference requires t >= 0");
  // At t = 0 the bare and rotated amplitudes coincide.
  const AmplitudePair a0 = frame_transform(init, 0.0, p, Frame::rotated);

  switch (variant) {
    case AnalyticVariant::infinite_waveguide: {
      if (p.omega_rabi != 0.0) {
        throw ValidationError("infinite_waveguide reference requires omega_rabi = 0");
      }
      return {a0.upper * std::exp(-0.5 * p.gamma * t),
              a0.lower * std::polar(1.0, p.delta * t), Frame::rotated};
    }
    case AnalyticVariant::zero_delay_rabi: {
      const double feedback_phase = std::remainder(p.omega_e * p.tau(), kTwoPi);
      if (std::abs(feedback_phase) > 1e-6) {
        throw ValidationError(
            "zero_delay_rabi reference requires omega_e * tau in 2*pi*Z");
      }
      // i dc/dt = H c with H = [[0, W], [W, -d]] = -d/2 + M, M^2 = D^2.
      const double delta_big =
          std::sqrt(0.25 * p.delta * p.delta + p.omega_rabi * p.omega_rabi);
      const double cs = std::cos(delta_big * t);
      const double sinc =
          delta_big > 0.0 ? std::sin(delta_big * t) / delta_big : t;
      const cplx global = std::polar(1.0, 0.5 * p.delta * t);
      const cplx m_ee = 0.5 * p.delta;
      const cplx m_es = p.omega_rabi;
      const cplx upper = cs * a0.upper - kI * sinc * (m_ee * a0.upper + m_es * a0.lower);
      const cplx lower = cs * a0.lower - kI * sinc * (m_es * a0.upper - m_ee * a0.lower);
      return {global * upper, global * lower, Frame::rotated};
    }
  }
  throw ValidationError("unknown analytic variant");
}

}  // namespace wqed
