#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace anomaly {

struct TimeWindow {
  double t1;
  double t2;

  TimeWindow(double t1, double t2);
  double length() const { return t2 - t1; }
};

// A scalar function of time, evaluable with two derivatives.  Immutable and
// cheap to copy; all factory products are safe to share across threads.
//
// Plateau profiles are exactly constant (zero first and second derivative)
// on the leading segment [t1, t1 + ramp_fraction*dt] and the trailing
// segment [t2 - ramp_fraction*dt, t2]; the transition in between uses a
// degree-13 polynomial smoothstep, so the profile is C^6 globally.  The high
// smoothness keeps finite-difference curvature accurate across the
// plateau/ramp junctions.
class Profile {
public:
  double value(double t) const;
  double derivative(double t) const;
  double second_derivative(double t) const;

  // Fraction of the window known to be exactly constant at each end
  // (nullopt when nothing is guaranteed, e.g. sampled or custom profiles).
  std::optional<double> plateau_fraction() const;

  static Profile plateau(double v_start, double v_end, const TimeWindow& window,
                         double ramp_fraction);
  static Profile constant(double v);

  // Cubic Hermite interpolant of uniformly spaced samples over the window,
  // with clamped zero end-derivatives.
  static Profile sampled(std::vector<double> values, const TimeWindow& window);

  // Arbitrary analytic profile; product-structure validation will generally
  // fail for these unless the callables are flat at the window ends.
  static Profile from_functions(std::function<double(double)> value,
                                std::function<double(double)> derivative,
                                std::function<double(double)> second_derivative);

  class Impl;

private:
  explicit Profile(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

} // namespace anomaly
