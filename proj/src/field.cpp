#include "wqed/field.hpp"

#include <cmath>

#include "wqed/error.hpp"

namespace wqed {

namespace {

constexpr cplx kI{0.0, 1.0};

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  const double dx = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) v[i] = lo + dx * static_cast<double>(i);
  v.back() = hi;
  return v;
}

}  // namespace

cplx field_profile(const EmissionRun& run, double x, double t) {
  if (!(x >= 0.0)) throw ValidationError("field_profile requires x >= 0");
  const SystemParams& p = run.params;
  const double d = p.distance;
  const double v = p.velocity;
  const double amplitude = std::sqrt(p.gamma / (2.0 * v));

  cplx psi{0.0, 0.0};
  const double reflected = t - (x + d) / v;
  if (reflected >= 0.0) psi += run.excited_bare(reflected);
  if (x < d) {
    const double direct = t + (x - d) / v;
    if (direct >= 0.0) psi -= run.excited_bare(direct);
  } else {
    const double direct = t - (x - d) / v;
    if (direct >= 0.0) psi -= run.excited_bare(direct);
  }
  return amplitude * psi;
}

FieldGrid intensity_map(const EmissionRun& run, double x_max, std::size_t nx,
                        double t_min, double t_max, std::size_t nt) {
  if (nx < 2 || nt < 2) throw ValidationError("intensity_map requires nx, nt >= 2");
  if (!(x_max > run.params.distance)) {
    throw ValidationError("intensity_map requires x_max > distance");
  }
  if (!(t_min >= 0.0) || !(t_max > t_min)) {
    throw ValidationError("intensity_map requires 0 <= t_min < t_max");
  }
  FieldGrid g;
  g.x = linspace(0.0, x_max, nx);
  g.t = linspace(t_min, t_max, nt);
  g.psi.resize(nx * nt);
  g.intensity.resize(nx * nt);
  // Cells are independent; rows are filled in order for determinism.
  for (std::size_t it = 0; it < nt; ++it) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const cplx psi = field_profile(run, g.x[ix], g.t[it]);
      g.psi[it * nx + ix] = psi;
      g.intensity[it * nx + ix] = std::norm(psi);
    }
  }
  return g;
}

FieldGrid intensity_map(const EmissionRun& run, double x_max, std::size_t nx,
                        std::size_t nt) {
  return intensity_map(run, x_max, nx, 0.0, run.end_time(), nt);
}

double default_spatial_step(const SystemParams& p) {
  const auto scales = characteristic_scales(p);
  const double lambda = scales.lambda_plus.value_or(scales.coherence_length);
  return lambda / 20.0;
}

BicField bic_field_profile(const BicSolution& sol, const SystemParams& p,
                           double x, double t) {
  BicField f{{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}};
  const double d = p.distance;
  const double v = p.velocity;
  if (x >= d) return f;
  const cplx scale = kI * std::sqrt(2.0 * p.gamma / v);
  if (sol.has_plus) {
    f.plus = scale * sol.residue_plus * std::sin(sol.omega_plus * (x - d) / v) *
             std::polar(1.0, -sol.omega_plus * t);
  }
  if (sol.has_minus) {
    f.minus = scale * sol.residue_minus *
              std::sin(sol.omega_minus * (x - d) / v) *
              std::polar(1.0, -sol.omega_minus * t);
  }
  f.total = f.plus + f.minus;
  return f;
}

double photon_norm(const EmissionRun& run, double t, double x_max,
                   std::size_t nx) {
  const SystemParams& p = run.params;
  if (!(x_max > p.velocity * t + p.distance)) {
    throw ValidationError("wavefront truncated: x_max must exceed v*t + d");
  }
  if (nx < 2) throw ValidationError("photon_norm requires nx >= 2");
  const double dx = x_max / static_cast<double>(nx - 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < nx; ++i) {
    const double x = i + 1 == nx ? x_max : dx * static_cast<double>(i);
    const double w = (i == 0 || i + 1 == nx) ? 0.5 : 1.0;
    sum += w * std::norm(field_profile(run, x, t));
  }
  return sum * dx;
}

}  // namespace wqed
