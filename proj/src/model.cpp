#include "wqed/model.hpp"

#include <algorithm>
#include <cmath>

#include "wqed/error.hpp"

namespace wqed {

namespace {

cplx phase(double angle) { return std::polar(1.0, angle); }

std::optional<double> wavelength(double velocity, double omega) {
  if (omega == 0.0) return std::nullopt;
  return kTwoPi * velocity / std::abs(omega);
}

void require(bool ok, const char* message) {
  if (!ok) throw ValidationError(message);
}

}  // namespace

void SystemParams::validate() const {
  require(std::isfinite(gamma) && gamma > 0.0, "gamma must be > 0");
  require(std::isfinite(velocity) && velocity > 0.0, "velocity must be > 0");
  require(std::isfinite(distance) && distance >= 0.0,
          "distance must be >= 0");
  require(std::isfinite(omega_rabi) && omega_rabi >= 0.0,
          "omega_rabi must be >= 0");
  require(std::isfinite(omega_e), "omega_e must be finite");
  require(std::isfinite(delta), "delta must be finite");
}

DressedBasis dressed_basis(const SystemParams& p) {
  const double delta_big =
      std::sqrt(0.25 * p.delta * p.delta + p.omega_rabi * p.omega_rabi);
  if (!(delta_big > 0.0)) throw ValidationError("dressed basis undefined");

  DressedBasis b;
  b.delta_big = delta_big;
  b.omega_bar = 0.5 * (p.omega_e + p.omega_s());
  b.omega_plus = b.omega_bar + delta_big;
  b.omega_minus = b.omega_bar - delta_big;
  // max(0, .) guards the Omega -> 0 limit where 2*Delta - |delta| rounds
  // slightly negative.
  b.sin_theta =
      std::sqrt(std::max(0.0, (2.0 * delta_big - p.delta) / (4.0 * delta_big)));
  b.cos_theta =
      std::sqrt(std::max(0.0, (2.0 * delta_big + p.delta) / (4.0 * delta_big)));
  return b;
}

CharacteristicScales characteristic_scales(const SystemParams& p) {
  const double delta_big =
      std::sqrt(0.25 * p.delta * p.delta + p.omega_rabi * p.omega_rabi);
  const double omega_bar = 0.5 * (p.omega_e + p.omega_s());

  CharacteristicScales s;
  s.lambda_e = wavelength(p.velocity, p.omega_e);
  s.lambda_plus = wavelength(p.velocity, omega_bar + delta_big);
  s.lambda_minus = wavelength(p.velocity, omega_bar - delta_big);
  s.lambda_osc = wavelength(p.velocity, p.omega_rabi);
  s.coherence_length = p.coherence_length();
  s.tau = p.tau();
  return s;
}

std::string_view to_string(Frame f) {
  switch (f) {
    case Frame::bare:
      return "bare";
    case Frame::rotated:
      return "rotated";
    case Frame::dressed:
      return "dressed";
  }
  return "unknown";
}

Frame parse_frame(std::string_view name) {
  if (name == "bare") return Frame::bare;
  if (name == "rotated") return Frame::rotated;
  if (name == "dressed") return Frame::dressed;
  throw ValidationError("unknown frame '" + std::string(name) +
                        "' (expected bare, rotated or dressed)");
}

namespace {

AmplitudePair to_bare(const AmplitudePair& a, double t, const SystemParams& p) {
  switch (a.frame) {
    case Frame::bare:
      return a;
    case Frame::rotated: {
      const cplx carrier = phase(-p.omega_e * t);
      return {a.upper * carrier, a.lower * carrier, Frame::bare};
    }
    case Frame::dressed: {
      const DressedBasis b = dressed_basis(p);
      const cplx plus = a.upper * phase(-b.omega_plus * t);
      const cplx minus = a.lower * phase(-b.omega_minus * t);
      return {b.cos_theta * plus + b.sin_theta * minus,
              b.sin_theta * plus - b.cos_theta * minus, Frame::bare};
    }
  }
  throw ValidationError("unknown frame tag");
}

AmplitudePair from_bare(const AmplitudePair& a, double t,
                        const SystemParams& p, Frame target) {
  switch (target) {
    case Frame::bare:
      return a;
    case Frame::rotated: {
      const cplx carrier = phase(p.omega_e * t);
      return {a.upper * carrier, a.lower * carrier, Frame::rotated};
    }
    case Frame::dressed: {
      const DressedBasis b = dressed_basis(p);
      const cplx plus = b.cos_theta * a.upper + b.sin_theta * a.lower;
      const cplx minus = b.sin_theta * a.upper - b.cos_theta * a.lower;
      return {plus * phase(b.omega_plus * t), minus * phase(b.omega_minus * t),
              Frame::dressed};
    }
  }
  throw ValidationError("unknown frame tag");
}

}  // namespace

AmplitudePair frame_transform(const AmplitudePair& a, double t,
                              const SystemParams& p, Frame target) {
  if (!(t >= 0.0)) throw ValidationError("frame_transform requires t >= 0");
  if (a.frame == target) return a;
  return from_bare(to_bare(a, t, p), t, p, target);
}

}  // namespace wqed
