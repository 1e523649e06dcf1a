#pragma once

// Emitter equations of motion with delayed feedback from the mirror:
//
//   bare     dC_s = -i w_s C_s - i W C_e
//            dC_e = -(i w_e + G/2) C_e - i W C_s + G/2 C_e(t - tau) H(t - tau)
//   rotated  C = c exp(-i w_e t); the delayed term picks up exp(i w_e tau)
//   dressed  c_+/c_- in the drive eigenbasis; cross terms rotate as e^{+-2i D t}
//
// Component order is always {upper, lower}: (e, s) or (+, -).

#include <optional>
#include <vector>

#include "wqed/dde_solver.hpp"
#include "wqed/model.hpp"

namespace wqed {

DdeRhs emitter_rhs(const SystemParams& p, Frame frame);

/// 1e-3/gamma capped by 50 points per period of the fastest envelope
/// frequency max(Omega, Delta, 1/tau), then snapped to divide tau.
double default_step(const SystemParams& p);

struct EmissionRun {
  SystemParams params;
  Frame frame = Frame::rotated;
  AmplitudePair initial;  // bare frame, t = 0
  Trajectory trajectory;  // in `frame`
  std::vector<double> pe;  // |C_e|^2 on trajectory.times()
  std::vector<double> ps;  // |C_s|^2

  const std::vector<double>& times() const { return trajectory.times(); }
  double end_time() const { return trajectory.end_time(); }
  /// Dense-output amplitudes at t, converted to `target`.
  AmplitudePair amplitudes_at(double t, Frame target = Frame::bare) const;
  /// Bare-frame C_e(t) including the exp(-i w_e t) carrier.
  cplx excited_bare(double t) const;
};

/// Integrates the chosen frame's delay equation from a normalized bare-frame
/// initial state (non-bare `init` is converted at t = 0). Populations are
/// reported in the bare frame.
EmissionRun simulate_emission(const SystemParams& p, const AmplitudePair& init,
                              double t_end, std::optional<double> h = {},
                              Frame frame = Frame::rotated);

enum class AnalyticVariant {
  infinite_waveguide,  // Omega = 0, no mirror: c_e = c_e(0) e^{-G t / 2}
  zero_delay_rabi,     // tau -> 0 with e^{i w_e tau} = 1: lossless Rabi problem
};

/// Closed-form rotated-frame amplitudes at time t.
AmplitudePair analytic_reference(const SystemParams& p,
                                 const AmplitudePair& init, double t,
                                 AnalyticVariant variant);

}  // namespace wqed
