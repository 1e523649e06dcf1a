#pragma once

// Bound states in the continuum: imaginary-axis roots of the Laplace-domain
// characteristic function and the residues that survive at long times.

#include <optional>

#include "wqed/model.hpp"

namespace wqed {

/// Exact geometries built by design_bic_geometry.
inline constexpr double kDesignPhaseTolerance = 1e-6;
/// Scans over user-supplied geometries.
inline constexpr double kDetectionPhaseTolerance = 1e-2;

/// D(s) = (s + i w_e + G/2 - G/2 e^{-s tau}) (s + i w_s) + W^2.
/// The exponential is dropped for tau = +infinity.
cplx characteristic_function(const SystemParams& p, cplx s);

struct BicSolution {
  double omega_plus = 0.0;
  double omega_minus = 0.0;
  /// remainder(w_pm tau, 2 pi), in [-pi, pi].
  double phase_plus = 0.0;
  double phase_minus = 0.0;
  bool has_plus = false;
  bool has_minus = false;
  std::optional<long long> n_plus;
  std::optional<long long> n_minus;
  /// Coefficients C_e^pm(0) of e^{-i w_pm t}; zero for non-BIC branches.
  cplx residue_plus{0.0, 0.0};
  cplx residue_minus{0.0, 0.0};
};

/// Residues of C_e(p) at p = -i w_pm assuming e^{-p tau} = 1 there,
/// regardless of whether the branch is actually commensurate.
struct BranchResidues {
  cplx plus;
  cplx minus;
};
BranchResidues branch_residues(const SystemParams& p, const AmplitudePair& init);

/// Checks w_pm tau = 2 n_pm pi within tol_phase. Throws ValidationError
/// ("no cavity region") for tau = 0.
BicSolution bic_frequencies(const SystemParams& p,
                            double tol_phase = kDesignPhaseTolerance,
                            const AmplitudePair& init = {});

/// Commensurate two-BIC geometry n_pm = m +- k: tau = 2 k pi / Delta,
/// omega_bar = m Delta / k, omega_e = omega_bar + delta / 2, d = v tau / 2.
SystemParams design_bic_geometry(double gamma, double omega_rabi, double delta,
                                 long long m, long long k,
                                 double velocity = 1.0);

/// C_e(t) after all decaying poles have died out: the sum of the surviving
/// BIC terms of `sol`.
cplx longtime_amplitude(const BicSolution& sol, double t);
cplx longtime_amplitude(const SystemParams& p, const AmplitudePair& init,
                        double t, double tol_phase = kDesignPhaseTolerance);

}  // namespace wqed
