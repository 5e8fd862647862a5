#include "anomaly/profile.hpp"

#include <cmath>
#include <utility>

#include "anomaly/errors.hpp"

namespace anomaly {

TimeWindow::TimeWindow(double t1, double t2) : t1(t1), t2(t2) {
  if (!(t1 < t2) || !std::isfinite(t1) || !std::isfinite(t2))
    throw ParameterError("time window requires finite t1 < t2");
}

class Profile::Impl {
public:
  virtual ~Impl() = default;
  virtual double value(double t) const = 0;
  virtual double derivative(double t) const = 0;
  virtual double second_derivative(double t) const = 0;
  virtual std::optional<double> plateau_fraction() const { return std::nullopt; }
};

namespace {

// Degree-13 smoothstep: s(0)=0, s(1)=1, s', s'' (and up to s^(6)) vanish at
// both ends.  s'(u) = 12012 u^6 (1-u)^6.
double smoothstep13(double u) {
  const double u2 = u * u;
  const double u3 = u2 * u;
  return u3 * u3 * u *
         (1716.0 +
          u * (-9009.0 +
               u * (20020.0 + u * (-24024.0 + u * (16380.0 + u * (-6006.0 + u * 924.0))))));
}

double smoothstep13_d1(double u) {
  const double w = u * (1.0 - u);
  const double w2 = w * w;
  return 12012.0 * w2 * w2 * w2;
}

double smoothstep13_d2(double u) {
  const double w = u * (1.0 - u);
  const double w2 = w * w;
  return 12012.0 * 6.0 * w2 * w2 * w * (1.0 - 2.0 * u);
}

class ConstantProfile final : public Profile::Impl {
public:
  explicit ConstantProfile(double v) : v_(v) {}
  double value(double) const override { return v_; }
  double derivative(double) const override { return 0.0; }
  double second_derivative(double) const override { return 0.0; }
  std::optional<double> plateau_fraction() const override { return 0.5; }

private:
  double v_;
};

class PlateauProfile final : public Profile::Impl {
public:
  PlateauProfile(double v_start, double v_end, const TimeWindow& w, double ramp_fraction)
      : v0_(v_start),
        dv_(v_end - v_start),
        ramp_begin_(w.t1 + ramp_fraction * w.length()),
        ramp_end_(w.t2 - ramp_fraction * w.length()),
        ramp_len_(ramp_end_ - ramp_begin_),
        fraction_(ramp_fraction) {}

  // plateau membership is decided on the t coordinate, so the constant
  // segments are bit-exact against the window arithmetic used by callers
  double value(double t) const override {
    if (t <= ramp_begin_) return v0_;
    if (t >= ramp_end_) return v0_ + dv_;
    return v0_ + dv_ * smoothstep13(param(t));
  }

  double derivative(double t) const override {
    if (t <= ramp_begin_ || t >= ramp_end_) return 0.0;
    return dv_ * smoothstep13_d1(param(t)) / ramp_len_;
  }

  double second_derivative(double t) const override {
    if (t <= ramp_begin_ || t >= ramp_end_) return 0.0;
    return dv_ * smoothstep13_d2(param(t)) / (ramp_len_ * ramp_len_);
  }

  std::optional<double> plateau_fraction() const override { return fraction_; }

private:
  double param(double t) const { return (t - ramp_begin_) / ramp_len_; }

  double v0_, dv_, ramp_begin_, ramp_end_, ramp_len_, fraction_;
};

// Cubic Hermite on a uniform grid, slopes by central differences, end
// slopes clamped to zero.  C^1; the second derivative is piecewise linear.
class SampledProfile final : public Profile::Impl {
public:
  SampledProfile(std::vector<double> values, const TimeWindow& w)
      : y_(std::move(values)), t0_(w.t1), dt_(w.length() / static_cast<double>(y_.size() - 1)) {
    const size_t n = y_.size();
    m_.assign(n, 0.0);
    for (size_t i = 1; i + 1 < n; ++i) m_[i] = (y_[i + 1] - y_[i - 1]) / (2.0 * dt_);
  }

  double value(double t) const override {
    auto [i, u] = locate(t);
    const double h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
    const double h10 = u * (1.0 - u) * (1.0 - u);
    const double h01 = u * u * (3.0 - 2.0 * u);
    const double h11 = u * u * (u - 1.0);
    return h00 * y_[i] + h10 * dt_ * m_[i] + h01 * y_[i + 1] + h11 * dt_ * m_[i + 1];
  }

  double derivative(double t) const override {
    auto [i, u] = locate(t);
    const double g00 = 6.0 * u * (u - 1.0);
    const double g10 = (1.0 - u) * (1.0 - 3.0 * u);
    const double g11 = u * (3.0 * u - 2.0);
    return (g00 * (y_[i] - y_[i + 1])) / dt_ + g10 * m_[i] + g11 * m_[i + 1];
  }

  double second_derivative(double t) const override {
    auto [i, u] = locate(t);
    const double k00 = (12.0 * u - 6.0);
    const double k10 = (6.0 * u - 4.0);
    const double k11 = (6.0 * u - 2.0);
    return (k00 * (y_[i] - y_[i + 1]) / dt_ + k10 * m_[i] + k11 * m_[i + 1]) / dt_;
  }

private:
  std::pair<size_t, double> locate(double t) const {
    const double s = (t - t0_) / dt_;
    const auto last = static_cast<double>(y_.size() - 2);
    double fi = std::floor(s);
    if (fi < 0.0) fi = 0.0;
    if (fi > last) fi = last;
    return {static_cast<size_t>(fi), s - fi};
  }

  std::vector<double> y_;
  std::vector<double> m_;
  double t0_, dt_;
};

class FunctionProfile final : public Profile::Impl {
public:
  FunctionProfile(std::function<double(double)> v, std::function<double(double)> d1,
                  std::function<double(double)> d2)
      : v_(std::move(v)), d1_(std::move(d1)), d2_(std::move(d2)) {}
  double value(double t) const override { return v_(t); }
  double derivative(double t) const override { return d1_(t); }
  double second_derivative(double t) const override { return d2_(t); }

private:
  std::function<double(double)> v_, d1_, d2_;
};

} // namespace

double Profile::value(double t) const { return impl_->value(t); }
double Profile::derivative(double t) const { return impl_->derivative(t); }
double Profile::second_derivative(double t) const { return impl_->second_derivative(t); }
std::optional<double> Profile::plateau_fraction() const { return impl_->plateau_fraction(); }

Profile Profile::plateau(double v_start, double v_end, const TimeWindow& window,
                         double ramp_fraction) {
  if (!(ramp_fraction > 0.0 && ramp_fraction < 0.5))
    throw ParameterError("ramp_fraction must lie in (0, 1/2)");
  if (!std::isfinite(v_start) || !std::isfinite(v_end))
    throw ParameterError("plateau profile endpoint values must be finite");
  if (v_start == v_end) return constant(v_start);
  return Profile(std::make_shared<PlateauProfile>(v_start, v_end, window, ramp_fraction));
}

Profile Profile::constant(double v) {
  if (!std::isfinite(v)) throw ParameterError("constant profile value must be finite");
  return Profile(std::make_shared<ConstantProfile>(v));
}

Profile Profile::sampled(std::vector<double> values, const TimeWindow& window) {
  if (values.size() < 2) throw ParameterError("sampled profile needs at least two values");
  for (double v : values)
    if (!std::isfinite(v)) throw ParameterError("sampled profile values must be finite");
  return Profile(std::make_shared<SampledProfile>(std::move(values), window));
}

Profile Profile::from_functions(std::function<double(double)> value,
                                std::function<double(double)> derivative,
                                std::function<double(double)> second_derivative) {
  return Profile(std::make_shared<FunctionProfile>(std::move(value), std::move(derivative),
                                                   std::move(second_derivative)));
}

} // namespace anomaly
