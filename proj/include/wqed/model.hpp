#pragma once

// Physical parameters of a driven Lambda-type emitter in front of a mirror,
// and the bare / rotated / dressed amplitude frames.
//
// Units: the decay rate gamma and the group velocity default to 1, so times
// are measured in 1/gamma and lengths in the coherence length v/gamma.

#include <complex>
#include <optional>
#include <string>
#include <string_view>

namespace wqed {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct SystemParams {
  double gamma = 1.0;       // decay rate into the waveguide
  double omega_rabi = 0.0;  // classical drive on |e> <-> |s>
  double omega_e = 100.0;   // excited-state energy (ground state at 0)
  double delta = 0.0;       // detuning omega_e - omega_s
  double distance = 0.0;    // emitter-mirror distance
  double velocity = 1.0;    // group velocity in the waveguide

  double omega_s() const { return omega_e - delta; }
  /// Round-trip delay emitter -> mirror -> emitter.
  double tau() const { return 2.0 * distance / velocity; }
  double coherence_length() const { return velocity / gamma; }

  /// Throws ValidationError naming the first offending field.
  void validate() const;
};

/// Eigenbasis of the emitter + drive Hamiltonian restricted to {|e>, |s>}:
///   |+> = cos(theta)|e> + sin(theta)|s>,   energy omega_bar + Delta
///   |-> = sin(theta)|e> - cos(theta)|s>,   energy omega_bar - Delta
struct DressedBasis {
  double omega_plus = 0.0;
  double omega_minus = 0.0;
  double omega_bar = 0.0;
  double delta_big = 0.0;  // sqrt(delta^2/4 + Omega^2)
  double sin_theta = 0.0;
  double cos_theta = 1.0;
};

/// Throws ValidationError("dressed basis undefined") when delta = Omega = 0.
DressedBasis dressed_basis(const SystemParams& p);

struct CharacteristicScales {
  std::optional<double> lambda_e;
  std::optional<double> lambda_plus;
  std::optional<double> lambda_minus;
  std::optional<double> lambda_osc;  // absent when Omega = 0
  double coherence_length = 0.0;
  double tau = 0.0;
};

CharacteristicScales characteristic_scales(const SystemParams& p);

enum class Frame { bare, rotated, dressed };

std::string_view to_string(Frame f);
/// Accepts "bare", "rotated", "dressed"; throws ValidationError otherwise.
Frame parse_frame(std::string_view name);

/// Emitter amplitudes. upper/lower are (C_e, C_s) in the bare frame,
/// (c_e, c_s) in the rotated frame and (c_+, c_-) in the dressed frame.
struct AmplitudePair {
  cplx upper{1.0, 0.0};
  cplx lower{0.0, 0.0};
  Frame frame = Frame::bare;

  double population() const { return std::norm(upper) + std::norm(lower); }
};

/// Re-expresses `a` (taken at time t) in `target`.
///   rotated: C = c exp(-i omega_e t)
///   dressed: C_e = cos(theta) c_+ e^{-i w+ t} + sin(theta) c_- e^{-i w- t}
///            C_s = sin(theta) c_+ e^{-i w+ t} - cos(theta) c_- e^{-i w- t}
AmplitudePair frame_transform(const AmplitudePair& a, double t,
                              const SystemParams& p, Frame target);

}  // namespace wqed
