#include "wqed/dde_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wqed/error.hpp"

namespace wqed {

Trajectory::Trajectory(std::size_t dimension, double step)
    : dimension_(dimension), step_(step) {}

void Trajectory::append(double t, std::span<const cplx> value,
                        std::span<const cplx> derivative) {
  times_.push_back(t);
  values_.insert(values_.end(), value.begin(), value.end());
  derivatives_.insert(derivatives_.end(), derivative.begin(), derivative.end());
}

void Trajectory::set_value(std::size_t i, std::span<const cplx> value) {
  std::copy(value.begin(), value.end(), values_.begin() + i * dimension_);
}

void Trajectory::set_derivative(std::size_t i,
                                std::span<const cplx> derivative) {
  std::copy(derivative.begin(), derivative.end(),
            derivatives_.begin() + i * dimension_);
}

void Trajectory::set_left_derivative(std::size_t i,
                                     std::span<const cplx> derivative) {
  gate_knot_ = i;
  gate_left_derivative_.assign(derivative.begin(), derivative.end());
}

std::span<const cplx> Trajectory::end_derivative(std::size_t interval) const {
  const std::size_t knot = interval + 1;
  if (gate_knot_ && *gate_knot_ == knot) return gate_left_derivative_;
  return derivative(knot);
}

std::size_t Trajectory::locate(double t) const {
  if (times_.empty() || !(t >= 0.0) || t > times_.back()) {
    std::ostringstream msg;
    msg << "history out of range: t=" << t << " not in [0, " << end_time()
        << "]";
    throw NumericalError(msg.str());
  }
  if (times_.size() == 1) return 0;
  const auto last = times_.size() - 2;
  const auto i = static_cast<std::size_t>(std::floor(t / step_));
  return std::min(i, last);
}

void Trajectory::evaluate_into(double t, std::span<cplx> out) const {
  const std::size_t i = locate(t);
  const auto knot = static_cast<std::size_t>(std::llround(t / step_));
  if (knot < times_.size() && times_[knot] == t) {
    const auto v = value(knot);
    std::copy(v.begin(), v.end(), out.begin());
    return;
  }
  const double s = (t - times_[i]) / step_;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = (s3 - 2.0 * s2 + s) * step_;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = (s3 - s2) * step_;
  const auto y0 = value(i);
  const auto y1 = value(i + 1);
  const auto d0 = derivative(i);
  const auto d1 = end_derivative(i);
  for (std::size_t c = 0; c < dimension_; ++c) {
    out[c] = h00 * y0[c] + h10 * d0[c] + h01 * y1[c] + h11 * d1[c];
  }
}

std::vector<cplx> Trajectory::evaluate(double t) const {
  std::vector<cplx> out(dimension_);
  evaluate_into(t, out);
  return out;
}

cplx Trajectory::evaluate_component(double t, std::size_t component) const {
  const std::size_t i = locate(t);
  const auto knot = static_cast<std::size_t>(std::llround(t / step_));
  if (knot < times_.size() && times_[knot] == t) return value(knot)[component];
  const double s = (t - times_[i]) / step_;
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2.0 * s3 - 3.0 * s2 + 1.0) * value(i)[component] +
         (s3 - 2.0 * s2 + s) * step_ * derivative(i)[component] +
         (-2.0 * s3 + 3.0 * s2) * value(i + 1)[component] +
         (s3 - s2) * step_ * end_derivative(i)[component];
}

std::vector<cplx> evaluate_history(const Trajectory& trajectory, double t) {
  return trajectory.evaluate(t);
}

double snap_step(double h, double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) return h;
  const double ratio = tau / h;
  const double nearest = std::round(ratio);
  // An exact divisor must not be bumped to the next count by rounding.
  const double steps =
      std::abs(ratio - nearest) <= 1e-9 * ratio ? nearest : std::ceil(ratio);
  return tau / std::max(1.0, steps);
}

namespace {

bool all_finite(std::span<const cplx> z) {
  return std::all_of(z.begin(), z.end(), [](const cplx& c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
  });
}

}  // namespace

Trajectory integrate_dde(const DdeProblem& problem, double t_end, double h,
                         const DdeOptions& options) {
  const std::size_t n = problem.dimension;
  if (n < 1) throw ValidationError("dimension must be >= 1");
  if (problem.initial.size() != n) {
    throw ValidationError("initial state size does not match dimension");
  }
  if (!problem.rhs) throw ValidationError("rhs is not set");
  if (!(problem.delay >= 0.0)) throw ValidationError("delay must be >= 0");
  if (!(h > 0.0) || !std::isfinite(h)) throw ValidationError("step must be > 0");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw ValidationError("t_end must be > 0");
  }

  const double tau = problem.delay;
  const bool zero_delay = tau == 0.0;
  // A delay longer than the run never opens the gate; no commensurability
  // requirement then.
  const bool gated = !zero_delay && std::isfinite(tau) && tau <= t_end;
  std::size_t lag = 0;
  if (gated) {
    if (options.snap_step) {
      h = snap_step(h, tau);
    } else {
      if (h > tau * (1.0 + 1e-12)) {
        throw ValidationError("step exceeds delay");
      }
      const double ratio = tau / h;
      if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
        throw ValidationError("delay must be an integer multiple of the step");
      }
    }
    lag = static_cast<std::size_t>(std::llround(tau / h));
  }
  const auto n_steps =
      static_cast<std::size_t>(std::ceil(t_end / h - 1e-9));

  auto gate_open = [&](std::size_t step_index) {
    return zero_delay || (gated && step_index >= lag);
  };

  Trajectory traj(n, h);
  std::vector<cplx> z = problem.initial;
  std::vector<cplx> dz(n), k1(n), k2(n), k3(n), k4(n), stage(n), mid(n);
  const std::span<const cplx> closed;

  auto eval = [&](double t, std::span<const cplx> y,
                  std::span<const cplx> delayed, std::span<cplx> out) {
    problem.rhs(t, y, zero_delay ? y : delayed, out);
  };

  // Hermite midpoint of interval j, computed from stored knots only.
  auto midpoint = [&](std::size_t j) {
    traj.evaluate_into((static_cast<double>(j) + 0.5) * h, mid);
    return std::span<const cplx>(mid);
  };

  // lag >= 1 whenever the gate can open, so it is closed at t = 0.
  eval(0.0, z, closed, dz);
  traj.append(0.0, z, dz);

  for (std::size_t i = 0; i < n_steps; ++i) {
    const double t = static_cast<double>(i) * h;
    const bool open = gate_open(i) && !zero_delay;
    const std::size_t j = open ? i - lag : 0;

    std::span<const cplx> d_start = open ? traj.value(j) : closed;
    eval(t, z, d_start, k1);
    std::span<const cplx> d_mid = open ? midpoint(j) : closed;
    for (std::size_t c = 0; c < n; ++c) stage[c] = z[c] + 0.5 * h * k1[c];
    eval(t + 0.5 * h, stage, d_mid, k2);
    for (std::size_t c = 0; c < n; ++c) stage[c] = z[c] + 0.5 * h * k2[c];
    eval(t + 0.5 * h, stage, d_mid, k3);
    std::span<const cplx> d_end = open ? traj.value(j + 1) : closed;
    for (std::size_t c = 0; c < n; ++c) stage[c] = z[c] + h * k3[c];
    eval(t + h, stage, d_end, k4);

    for (std::size_t c = 0; c < n; ++c) {
      z[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
    }
    const double t_next = static_cast<double>(i + 1) * h;
    if (!all_finite(z)) {
      std::ostringstream msg;
      msg << "diverged at t=" << t_next;
      throw NumericalError(msg.str());
    }

    const bool open_next = gate_open(i + 1) && !zero_delay;
    if (open_next) {
      // value(i + 1 - lag) exists because lag >= 1.
      traj.append(t_next, z, z);
      eval(t_next, z, traj.value(i + 1 - lag), dz);
    } else {
      eval(t_next, z, closed, dz);
      traj.append(t_next, z, dz);
    }
    traj.set_derivative(i + 1, dz);
    if (open_next && !open) {
      eval(t_next, z, closed, dz);
      traj.set_left_derivative(i + 1, dz);
    }
  }
  return traj;
}

}  // namespace wqed
