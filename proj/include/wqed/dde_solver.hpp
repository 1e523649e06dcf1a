#pragma once

// Fixed-step RK4 method of steps for complex systems with one discrete delay,
// with cubic Hermite dense output of the history.
//
// The delayed term is gated by a right-continuous Heaviside step: the rhs
// receives the delayed state z(t - tau) only on steps starting at t >= tau.
// There is no prehistory, so z(t < 0) is never read.

#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace wqed {

using cplx = std::complex<double>;

/// dz/dt = rhs(t, z, z_delayed). `delayed` is empty while the gate is closed.
using DdeRhs = std::function<void(double t, std::span<const cplx> z,
                                  std::span<const cplx> delayed,
                                  std::span<cplx> dz)>;

struct DdeProblem {
  std::size_t dimension = 1;
  DdeRhs rhs;
  /// tau >= 0; +infinity means the delayed term never switches on.
  double delay = std::numeric_limits<double>::infinity();
  std::vector<cplx> initial;
};

struct DdeOptions {
  /// Shrink h to tau / ceil(tau / h) so delayed arguments land on knots.
  /// When false, h must already divide tau.
  bool snap_step = true;
};

/// Uniform-grid solution with the data needed for Hermite interpolation.
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(std::size_t dimension, double step);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return times_.size(); }
  double step() const { return step_; }
  double end_time() const { return times_.empty() ? 0.0 : times_.back(); }
  const std::vector<double>& times() const { return times_; }

  std::span<const cplx> value(std::size_t i) const {
    return {values_.data() + i * dimension_, dimension_};
  }
  /// Right derivative at knot i (the one used by the step starting there).
  std::span<const cplx> derivative(std::size_t i) const {
    return {derivatives_.data() + i * dimension_, dimension_};
  }

  /// Cubic Hermite interpolation on the enclosing interval; exact at knots.
  /// Throws NumericalError("history out of range") outside [0, end_time()].
  std::vector<cplx> evaluate(double t) const;
  void evaluate_into(double t, std::span<cplx> out) const;
  /// Single component, same semantics as evaluate().
  cplx evaluate_component(double t, std::size_t component) const;

  // Construction interface used by integrate_dde.
  void append(double t, std::span<const cplx> value,
              std::span<const cplx> derivative);
  void set_value(std::size_t i, std::span<const cplx> value);
  void set_derivative(std::size_t i, std::span<const cplx> derivative);
  /// Left derivative at a knot where the delay gate switches on.
  void set_left_derivative(std::size_t i, std::span<const cplx> derivative);

 private:
  std::size_t locate(double t) const;
  std::span<const cplx> end_derivative(std::size_t interval) const;

  std::size_t dimension_ = 0;
  double step_ = 0.0;
  std::vector<double> times_;
  std::vector<cplx> values_;
  std::vector<cplx> derivatives_;
  std::optional<std::size_t> gate_knot_;
  std::vector<cplx> gate_left_derivative_;
};

/// Step adjusted to divide tau: tau / ceil(tau / h). Returns h for tau <= 0
/// or non-finite tau.
double snap_step(double h, double tau);

/// Classical RK4 on t_i = i*h up to the first knot >= t_end.
/// Throws ValidationError on bad input, NumericalError("diverged at t=...")
/// on a non-finite state.
Trajectory integrate_dde(const DdeProblem& problem, double t_end, double h,
                         const DdeOptions& options = {});

/// Free-function form of Trajectory::evaluate.
std::vector<cplx> evaluate_history(const Trajectory& trajectory, double t);

}  // namespace wqed
