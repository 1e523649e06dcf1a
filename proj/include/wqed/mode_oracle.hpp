#pragma once

// Brute-force reference: the waveguide continuum discretized into a uniform
// band of k > 0 modes around omega_e, integrated together with the emitter in
// the single-excitation sector. The delay equations are not used here.

#include <cstddef>
#include <span>
#include <vector>

#include "wqed/model.hpp"

namespace wqed {

struct ModeGrid {
  std::vector<double> k;
  std::vector<double> coupling;   // g_k = sqrt(G v / pi) sin(k d)
  std::vector<double> frequency;  // w_k = v k
  double dk = 0.0;
  double velocity = 1.0;

  std::size_t size() const { return k.size(); }
  /// Time after which the discrete spectrum rephases: 2 pi / (v dk).
  double recurrence_time() const { return kTwoPi / (velocity * dk); }
};

/// 50 gamma + 5 Omega.
double default_bandwidth(const SystemParams& p);

/// n_modes uniform nodes spanning [max(0, w_e - W), w_e + W] / v. When the
/// band is floored at k = 0 the nodes start at dk instead. Throws
/// ValidationError("increase n_modes") if the recurrence time is not above
/// 2 t_end.
ModeGrid build_mode_grid(const SystemParams& p, double bandwidth,
                         std::size_t n_modes, double t_end);

/// Bare-frame amplitudes (C_e, C_s, beta_k).
struct FullState {
  double t = 0.0;
  cplx c_e{0.0, 0.0};
  cplx c_s{0.0, 0.0};
  std::vector<cplx> beta;

  double norm(double dk) const;
};

struct ModeRun {
  std::vector<double> times;
  std::vector<cplx> c_e;  // bare frame
  std::vector<cplx> c_s;
  std::vector<double> norm;
  std::vector<FullState> snapshots;
  /// max_t |N(t) - N(0)|.
  double max_norm_drift = 0.0;

  double pe(std::size_t i) const { return std::norm(c_e[i]); }
};

struct ModeOptions {
  /// Throws NumericalError("step too large") when |N - 1| exceeds this.
  double max_norm_drift = 1e-3;
};

/// RK4 in the interaction picture (beta_k ~ e^{-i w_k t}, C ~ e^{-i w_e t}),
/// so the step only has to resolve detunings w_k - w_e. Snapshots are taken
/// at the knots nearest to `snapshot_times`.
ModeRun integrate_modes(const SystemParams& p, const ModeGrid& grid,
                        const AmplitudePair& init, double t_end, double h,
                        std::span<const double> snapshot_times = {},
                        const ModeOptions& options = {});

/// psi(x) = sqrt(2/pi) sum_k beta_k sin(k x) dk.
cplx reconstruct_field_from_modes(const FullState& state, const ModeGrid& grid,
                                  double x);

}  // namespace wqed
