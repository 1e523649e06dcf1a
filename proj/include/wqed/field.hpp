#pragma once

// Emitted single-photon field on the half line x >= 0 reconstructed from the
// emitter history by retarded-time evaluation:
//
//   psi(x, t) = sqrt(G / 2v) [ C_e(t - (x + d)/v) H(.)
//                            - C_e(t + (x - d)/v) H(.)   for x < d
//                            - C_e(t - (x - d)/v) H(.) ] for x >= d
//
// Temporal gates are right-continuous; the spatial split is x < d / x >= d.

#include <cstddef>
#include <vector>

#include "wqed/bic.hpp"
#include "wqed/dynamics.hpp"

namespace wqed {

struct FieldGrid {
  std::vector<double> x;
  std::vector<double> t;
  std::vector<cplx> psi;          // row-major [t][x]
  std::vector<double> intensity;  // |psi|^2, same layout

  std::size_t nx() const { return x.size(); }
  std::size_t nt() const { return t.size(); }
  cplx psi_at(std::size_t it, std::size_t ix) const { return psi[it * nx() + ix]; }
  double intensity_at(std::size_t it, std::size_t ix) const {
    return intensity[it * nx() + ix];
  }
};

/// Throws NumericalError when a needed retarded time exceeds the run.
cplx field_profile(const EmissionRun& run, double x, double t);

/// Uniform nx-by-nt grid over [0, x_max] x [0, run end time].
FieldGrid intensity_map(const EmissionRun& run, double x_max, std::size_t nx,
                        std::size_t nt);
FieldGrid intensity_map(const EmissionRun& run, double x_max, std::size_t nx,
                        double t_min, double t_max, std::size_t nt);

/// lambda_plus / 20, the default spatial resolution.
double default_spatial_step(const SystemParams& p);

struct BicField {
  cplx plus;
  cplx minus;
  cplx total;
};

/// Steady BIC standing waves:
///   psi_pm = i sqrt(2G/v) C_e^pm(0) sin(w_pm (x - d)/v) e^{-i w_pm t}, x < d
/// and zero for x >= d.
BicField bic_field_profile(const BicSolution& sol, const SystemParams& p,
                           double x, double t);

/// Trapezoidal integral of |psi(x, t)|^2 over [0, x_max] with nx nodes.
/// Throws ValidationError("wavefront truncated") unless x_max > v t + d.
double photon_norm(const EmissionRun& run, double t, double x_max,
                   std::size_t nx);

}  // namespace wqed
