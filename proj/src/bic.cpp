#include "wqed/bic.hpp"

#include <cmath>

#include "wqed/error.hpp"

namespace wqed {

namespace {
constexpr cplx kI{0.0, 1.0};
}

cplx characteristic_function(const SystemParams& p, cplx s) {
  const double tau = p.tau();
  cplx first = s + kI * p.omega_e + 0.5 * p.gamma;
  if (std::isfinite(tau)) first -= 0.5 * p.gamma * std::exp(-s * tau);
  return first * (s + kI * p.omega_s()) + p.omega_rabi * p.omega_rabi;
}

BranchResidues branch_residues(const SystemParams& p, const AmplitudePair& init) {
  const DressedBasis b = dressed_basis(p);
  const AmplitudePair a = frame_transform(init, 0.0, p, Frame::bare);
  const double gt = p.gamma * p.tau();
  const double cos2 = b.cos_theta * b.cos_theta;
  const double sin2 = b.sin_theta * b.sin_theta;
  const double drive = p.omega_rabi / (2.0 * b.delta_big);
  // Residue N(p0) / D'(p0) of C_e(p) at p0 = -i w_pm with e^{-p0 tau} = 1.
  return {2.0 / (2.0 + gt * cos2) * (cos2 * a.upper + drive * a.lower),
          2.0 / (2.0 + gt * sin2) * (sin2 * a.upper - drive * a.lower)};
}

BicSolution bic_frequencies(const SystemParams& p, double tol_phase,
                            const AmplitudePair& init) {
  p.validate();
  const double tau = p.tau();
  if (!(tau > 0.0)) throw ValidationError("no cavity region");
  if (!std::isfinite(tau)) throw ValidationError("tau must be finite");
  const DressedBasis b = dressed_basis(p);

  BicSolution sol;
  sol.omega_plus = b.omega_plus;
  sol.omega_minus = b.omega_minus;
  sol.phase_plus = std::remainder(b.omega_plus * tau, kTwoPi);
  sol.phase_minus = std::remainder(b.omega_minus * tau, kTwoPi);
  sol.has_plus = std::abs(sol.phase_plus) <= tol_phase;
  sol.has_minus = std::abs(sol.phase_minus) <= tol_phase;

  const BranchResidues r = branch_residues(p, init);
  if (sol.has_plus) {
    sol.n_plus = std::llround(b.omega_plus * tau / kTwoPi);
    sol.residue_plus = r.plus;
  }
  if (sol.has_minus) {
    sol.n_minus = std::llround(b.omega_minus * tau / kTwoPi);
    sol.residue_minus = r.minus;
  }
  return sol;
}

SystemParams design_bic_geometry(double gamma, double omega_rabi, double delta,
                                 long long m, long long k, double velocity) {
  if (k < 1 || m <= k) throw ValidationError("design requires m > k >= 1");
  if (!(omega_rabi > 0.0)) throw ValidationError("design requires omega_rabi > 0");

  const double delta_big = std::sqrt(0.25 * delta * delta + omega_rabi * omega_rabi);
  const double tau = kTwoPi * static_cast<double>(k) / delta_big;
  const double omega_bar =
      static_cast<double>(m) * delta_big / static_cast<double>(k);

  SystemParams p;
  p.gamma = gamma;
  p.omega_rabi = omega_rabi;
  p.delta = delta;
  p.velocity = velocity;
  p.omega_e = omega_bar + 0.5 * delta;
  p.distance = 0.5 * velocity * tau;
  if (!(p.omega_s() > 0.0)) throw ValidationError("unphysical design");
  p.validate();
  return p;
}

cplx longtime_amplitude(const BicSolution& sol, double t) {
  cplx c{0.0, 0.0};
  if (sol.has_plus) c += sol.residue_plus * std::polar(1.0, -sol.omega_plus * t);
  if (sol.has_minus) c += sol.residue_minus * std::polar(1.0, -sol.omega_minus * t);
  return c;
}

cplx longtime_amplitude(const SystemParams& p, const AmplitudePair& init,
                        double t, double tol_phase) {
  return longtime_amplitude(bic_frequencies(p, tol_phase, init), t);
}

}  // namespace wqed
