#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "wqed/dde_solver.hpp"
#include "wqed/error.hpp"

using namespace wqed;

namespace {

DdeProblem scalar(std::function<cplx(double, cplx, const cplx*)> f, double delay) {
  DdeProblem prob;
  prob.dimension = 1;
  prob.delay = delay;
  prob.initial = {cplx{1.0, 0.0}};
  prob.rhs = [f](double t, std::span<const cplx> z, std::span<const cplx> lag,
                 std::span<cplx> dz) { dz[0] = f(t, z[0], lag.empty() ? nullptr : lag.data()); };
  return prob;
}

DdeProblem pure_delay() {
  return scalar([](double, cplx, const cplx* lag) { return lag ? *lag : cplx{0.0}; }, 1.0);
}

}  // namespace

TEST_CASE("no delay term reduces to an exponential") {
  const DdeProblem prob = scalar([](double, cplx z, const cplx*) { return -z; },
                                 std::numeric_limits<double>::infinity());
  const Trajectory tr = integrate_dde(prob, 1.0, 1e-3);
  CHECK(tr.end_time() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(tr.evaluate(1.0)[0] - std::exp(-1.0)) < 1e-9);
}

TEST_CASE("method of steps on z'(t) = z(t - 1)") {
  const Trajectory tr = integrate_dde(pure_delay(), 3.0, 1e-3);
  CHECK(std::abs(tr.evaluate(0.5)[0] - 1.0) < 1e-12);
  CHECK(std::abs(tr.evaluate(1.5)[0] - 1.5) < 1e-9);
  CHECK(std::abs(tr.evaluate(2.0)[0] - 2.0) < 1e-9);
  CHECK(std::abs(tr.evaluate(2.5)[0] - (2.5 + 0.125)) < 1e-9);
  CHECK(std::abs(tr.evaluate(3.0)[0] - 3.5) < 1e-9);
}

TEST_CASE("zero delay with an open gate is an ODE") {
  const DdeProblem prob = scalar(
      [](double, cplx z, const cplx* lag) { return -z + (lag ? *lag : cplx{0.0}); }, 0.0);
  const Trajectory tr = integrate_dde(prob, 2.0, 1e-2);
  for (std::size_t i = 0; i < tr.size(); ++i) CHECK(tr.value(i)[0] == cplx{1.0, 0.0});
}

TEST_CASE("dense output reproduces knots exactly") {
  const DdeProblem prob = scalar([](double t, cplx z, const cplx*) {
    return cplx{std::cos(t), 0.3} * z;
  }, std::numeric_limits<double>::infinity());
  const Trajectory tr = integrate_dde(prob, 2.0, 0.01);
  for (std::size_t i = 0; i < tr.size(); i += 7) {
    CHECK(tr.evaluate(tr.times()[i])[0] == tr.value(i)[0]);
    CHECK(evaluate_history(tr, tr.times()[i])[0] == tr.value(i)[0]);
  }
}

TEST_CASE("Hermite interpolation is exact on linear data") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const cplx a{u(rng), u(rng)};
    const cplx b{u(rng), u(rng)};
    const double h = 0.05 + 0.1 * std::abs(u(rng));
    Trajectory tr(1, h);
    for (int i = 0; i <= 30; ++i) {
      const double t = h * i;
      const cplx v = a + b * t;
      tr.append(t, {&v, 1}, {&b, 1});
    }
    for (int i = 0; i < 30; ++i) {
      const double t = h * (i + 0.5);
      CHECK(std::abs(tr.evaluate_component(t, 0) - (a + b * t)) < 1e-13);
    }
  }
}

TEST_CASE("Hermite midpoint error on exp(-t) at h = 1e-2") {
  const double h = 1e-2;
  Trajectory tr(1, h);
  for (int i = 0; i <= 200; ++i) {
    const double t = h * i;
    const cplx v{std::exp(-t), 0.0};
    const cplx dv = -v;
    tr.append(t, {&v, 1}, {&dv, 1});
  }
  double err = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double t = h * (i + 0.5);
    err = std::max(err, std::abs(tr.evaluate(t)[0] - std::exp(-t)));
  }
  CHECK(err < 1e-9);
}

TEST_CASE("fourth-order convergence before the delay fires") {
  const cplx lambda{-1.0, 2.0};
  const DdeProblem prob =
      scalar([lambda](double, cplx z, const cplx* lag) {
        return lambda * z + (lag ? *lag : cplx{0.0});
      }, 2.0);
  auto err = [&](double h) {
    return std::abs(integrate_dde(prob, 2.0, h).evaluate(2.0)[0] - std::exp(lambda * 2.0));
  };
  const double ratio = err(0.1) / err(0.05);
  CHECK(ratio >= 12.0);
  CHECK(ratio <= 20.0);
}

TEST_CASE("integration is bitwise deterministic") {
  const DdeProblem prob = scalar([](double t, cplx z, const cplx* lag) {
    return cplx{-0.5, 3.0} * z + std::sin(t) * (lag ? *lag : cplx{0.0});
  }, 0.7);
  const Trajectory a = integrate_dde(prob, 5.0, 1e-3);
  const Trajectory b = integrate_dde(prob, 5.0, 1e-3);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.value(i)[0] == b.value(i)[0]);
    CHECK(a.derivative(i)[0] == b.derivative(i)[0]);
  }
}

TEST_CASE("the derivative jump at the gate is not smoothed") {
  const double h = 0.01;
  const Trajectory tr = integrate_dde(pure_delay(), 2.0, h);
  // z = 1 on [0, 1] and 1 + (t - 1) on [1, 2].
  CHECK(std::abs(tr.evaluate(1.0 - 0.5 * h)[0] - 1.0) < 1e-14);
  CHECK(std::abs(tr.evaluate(1.0 + 0.5 * h)[0] - (1.0 + 0.5 * h)) < 1e-12);
  CHECK(tr.evaluate(1.0)[0] == cplx{1.0, 0.0});
}

TEST_CASE("step snapping and step validation") {
  CHECK(snap_step(0.3, 1.0) == doctest::Approx(0.25));
  CHECK(snap_step(0.25, 1.0) == 0.25);
  CHECK(snap_step(1e-3, 2e9) == doctest::Approx(1e-3).epsilon(1e-15));
  CHECK(snap_step(0.3, std::numeric_limits<double>::infinity()) == 0.3);
  CHECK(snap_step(0.3, 0.0) == 0.3);
  // 1 / 0.3 is not an integer: snapped to 0.25.
  const Trajectory tr = integrate_dde(pure_delay(), 2.0, 0.3);
  CHECK(tr.step() == doctest::Approx(0.25));
  const DdeOptions strict{false};
  CHECK_THROWS_WITH_AS(integrate_dde(pure_delay(), 2.0, 1.5, strict), "step exceeds delay",
                       ValidationError);
  CHECK_THROWS_AS(integrate_dde(pure_delay(), 2.0, 0.3, strict), ValidationError);
  CHECK_NOTHROW(integrate_dde(pure_delay(), 2.0, 0.25, strict));
}

TEST_CASE("invalid problems and out-of-range history") {
  DdeProblem prob = pure_delay();
  CHECK_THROWS_AS(integrate_dde(prob, 0.0, 0.1), ValidationError);
  CHECK_THROWS_AS(integrate_dde(prob, 1.0, -0.1), ValidationError);
  prob.delay = -1.0;
  CHECK_THROWS_AS(integrate_dde(prob, 1.0, 0.1), ValidationError);
  prob = pure_delay();
  prob.initial = {};
  CHECK_THROWS_AS(integrate_dde(prob, 1.0, 0.1), ValidationError);
  const Trajectory tr = integrate_dde(pure_delay(), 1.0, 0.1);
  CHECK_THROWS_AS(tr.evaluate(1.5), NumericalError);
  CHECK_THROWS_AS(tr.evaluate(-0.1), NumericalError);
}

TEST_CASE("divergence is reported") {
  const DdeProblem prob = scalar([](double, cplx z, const cplx*) { return 1e5 * z; },
                                 std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(integrate_dde(prob, 1.0, 0.01), NumericalError);
}
