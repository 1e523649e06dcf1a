#include <cmath>
#include <vector>

#include "doctest.h"
#include "wqed/dynamics.hpp"
#include "wqed/error.hpp"
#include "wqed/field.hpp"
#include "wqed/mode_oracle.hpp"

using namespace wqed;

namespace {

/// Band wide enough that truncation stays below the comparison tolerance.
constexpr double kWideCarrier = 1000.0;
constexpr double kWideBand = 500.0;

double max_discrepancy(const SystemParams& p, double bandwidth, std::size_t n_modes,
                       double t_end, double* drift = nullptr) {
  const double h = 1e-3;
  const EmissionRun dde = simulate_emission(p, {}, t_end, h);
  const ModeGrid grid = build_mode_grid(p, bandwidth, n_modes, t_end);
  const ModeRun modes = integrate_modes(p, grid, {}, t_end, h);
  double diff = 0.0;
  for (std::size_t i = 0; i < modes.times.size(); ++i) {
    const double pe = std::norm(dde.amplitudes_at(modes.times[i], Frame::rotated).upper);
    diff = std::max(diff, std::abs(modes.pe(i) - pe));
  }
  if (drift) *drift = modes.max_norm_drift;
  return diff;
}

}  // namespace

TEST_CASE("mode grid spacing and recurrence") {
  SystemParams p;
  p.distance = 0.94;
  const ModeGrid g = build_mode_grid(p, 50.0, 4001, 125.0);
  CHECK(g.size() == 4001);
  CHECK(g.dk == doctest::Approx(0.025).epsilon(1e-12));
  CHECK(g.recurrence_time() == doctest::Approx(251.327).epsilon(1e-5));
  CHECK(g.k.front() == doctest::Approx(50.0));
  CHECK(g.k.back() == doctest::Approx(150.0));
  CHECK_THROWS_AS(build_mode_grid(p, 50.0, 4001, 126.0), ValidationError);
  CHECK(default_bandwidth(p) == 50.0);
  const ModeGrid floored = build_mode_grid(p, 150.0, 1000, 10.0);
  CHECK(floored.k.front() == doctest::Approx(floored.dk));
  CHECK(floored.k.back() == doctest::Approx(250.0));
}

TEST_CASE("couplings: node at the mirror and extremum") {
  SystemParams p;
  const ModeGrid none = build_mode_grid(p, 50.0, 1001, 10.0);
  for (double g : none.coupling) CHECK(g == 0.0);

  const ModeGrid probe = build_mode_grid(p, 50.0, 1001, 10.0);
  p.distance = kPi / (2.0 * probe.k[300]);
  const ModeGrid g = build_mode_grid(p, 50.0, 1001, 10.0);
  CHECK(std::abs(g.coupling[300]) == doctest::Approx(std::sqrt(1.0 / kPi)).epsilon(1e-14));
  for (double c : g.coupling) CHECK(std::abs(c) <= std::sqrt(1.0 / kPi) + 1e-15);
}

TEST_CASE("decoupled emitter is the closed Rabi problem") {
  SystemParams p;
  p.omega_rabi = 0.7;
  p.delta = 0.4;
  const ModeGrid g = build_mode_grid(p, 50.0, 1001, 10.0);
  const ModeRun run = integrate_modes(p, g, {}, 10.0, 1e-3);
  double err = 0.0;
  for (std::size_t i = 0; i < run.times.size(); i += 10) {
    const double t = run.times[i];
    const AmplitudePair ref = analytic_reference(p, {}, t, AnalyticVariant::zero_delay_rabi);
    const cplx carrier = std::polar(1.0, p.omega_e * t);
    err = std::max(err, std::abs(run.c_e[i] * carrier - ref.upper));
    err = std::max(err, std::abs(run.c_s[i] * carrier - ref.lower));
  }
  CHECK(err < 1e-10);
  CHECK(run.max_norm_drift < 1e-12);
}

TEST_CASE("wide-band oracle agrees with the delay equation across regimes") {
  struct Case {
    double distance, omega;
  };
  for (const Case c : {Case{0.316, 0.0}, Case{0.94, 10.0}, Case{18.0, 0.0}}) {
    SystemParams p;
    p.omega_e = kWideCarrier;
    p.distance = c.distance;
    p.omega_rabi = c.omega;
    double drift = 0.0;
    const double diff = max_discrepancy(p, kWideBand, 4001, 10.0, &drift);
    CAPTURE(c.distance);
    CAPTURE(c.omega);
    CHECK(diff < 5e-3);
    CHECK(drift < 1e-4);
  }
}

TEST_CASE("discrepancy shrinks as the band widens") {
  SystemParams p;
  p.omega_e = kWideCarrier;
  p.distance = 0.94;
  double previous = 1.0;
  for (double w : {125.0, 250.0, 500.0}) {
    const double diff = max_discrepancy(p, w, static_cast<std::size_t>(8.0 * w) + 1, 10.0);
    CHECK(diff < previous);
    previous = diff;
  }
}

TEST_CASE("discrepancy shrinks as the mode spacing halves" * doctest::skip()) {
  // Registered separately in ctest; see the mode_oracle_spacing test.
  SystemParams p;
  p.omega_e = 400.0;
  p.distance = 0.94;
  double previous = 1.0;
  for (std::size_t n : {1601u, 3201u, 6401u}) {
    const double diff = max_discrepancy(p, 200.0, n, 10.0);
    MESSAGE("n_modes=" << n << " max discrepancy " << diff);
    CHECK(diff < previous);
    previous = diff;
  }
}

TEST_CASE("norm drift guard") {
  SystemParams p;
  p.distance = 0.94;
  const ModeGrid g = build_mode_grid(p, 50.0, 1001, 5.0);
  CHECK_THROWS_AS(integrate_modes(p, g, {}, 5.0, 0.2), NumericalError);
  CHECK_THROWS_AS(integrate_modes(p, g, {}, 5.0, -1.0), ValidationError);
}

TEST_CASE("mode-sum field") {
  SystemParams p;
  p.omega_e = kWideCarrier;
  p.distance = 0.94;
  const double t = 1.5;
  const ModeGrid g = build_mode_grid(p, kWideBand, 4001, t);
  const std::vector<double> snaps = {0.0, t};
  const ModeRun modes = integrate_modes(p, g, {}, t, 1e-3, snaps);
  REQUIRE(modes.snapshots.size() == 2);
  CHECK(reconstruct_field_from_modes(modes.snapshots[0], g, 0.4) == cplx{0.0, 0.0});
  CHECK(std::abs(reconstruct_field_from_modes(modes.snapshots[1], g, 0.0)) == 0.0);

  const EmissionRun dde = simulate_emission(p, {}, t, 1e-3);
  const double front = p.velocity * t + p.distance;
  const double reflected = p.velocity * t - p.distance;
  double peak = 0.0;
  double err = 0.0;
  for (int i = 1; i < 600; ++i) {
    const double x = front * i / 600.0;
    if (std::abs(x - front) < 0.1 || std::abs(x - reflected) < 0.1 ||
        std::abs(x - p.distance) < 0.1) {
      continue;
    }
    const double im = std::norm(reconstruct_field_from_modes(modes.snapshots[1], g, x));
    const double id = std::norm(field_profile(dde, x, t));
    peak = std::max(peak, id);
    err = std::max(err, std::abs(im - id));
  }
  CHECK(err < 5e-2 * peak);
  const double photons = modes.snapshots[1].norm(g.dk) - std::norm(modes.snapshots[1].c_e) -
                         std::norm(modes.snapshots[1].c_s);
  const double dx = kTwoPi / p.omega_e / 20.0;
  const auto nx = static_cast<std::size_t>(std::ceil((front + dx) / dx)) + 1;
  CHECK(std::abs(photons - photon_norm(dde, t, front + dx, nx)) < 1e-2);
}
