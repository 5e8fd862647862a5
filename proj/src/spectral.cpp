#include "anomaly/spectral.hpp"

#include <cmath>
#include <vector>

#include "anomaly/errors.hpp"

namespace anomaly {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
} // namespace

ArithmeticSpectrum circle_spectrum(double circumference, CircleSpin spin, double gauge_value,
                                   bool conjugate) {
  if (!(circumference > 0.0)) throw ParameterError("circle circumference must be positive");
  ArithmeticSpectrum s;
  s.scale = kTwoPi / circumference;
  s.sigma = (spin == CircleSpin::trivial) ? 0.0 : 0.5;
  s.shift = conjugate ? gauge_value : -gauge_value;
  return s;
}

EtaResult eta_closed(const ArithmeticSpectrum& spectrum) {
  const double q0 = spectrum.sigma + spectrum.shift / spectrum.scale;
  double q = q0 - std::floor(q0);
  // |lambda| < kKernelTolerance * scale marks a kernel mode
  const double dist = std::min(q, 1.0 - q);
  EtaResult out;
  if (dist < kKernelTolerance) {
    out.eta = 0.0;
    out.h = 1;
  } else {
    out.eta = 1.0 - 2.0 * q;
    out.h = 0;
  }
  const double half = 0.5 * (out.eta + out.h);
  out.reduced = half - std::floor(half);
  return out;
}

namespace {

// polynomial extrapolation of (z_j, v_j) to z = 0
double neville_to_zero(const std::vector<double>& zs, std::vector<double> vals) {
  const size_t n = vals.size();
  for (size_t j = 1; j < n; ++j)
    for (size_t i = 0; i + j < n; ++i)
      vals[i] = vals[i + 1] + (vals[i] - vals[i + 1]) * (0.0 - zs[i + j]) / (zs[i] - zs[i + j]);
  return vals[0];
}

} // namespace

double eta_zeta_oracle(const ArithmeticSpectrum& spectrum, int cutoff, int richardson_levels) {
  if (cutoff < 10) throw ParameterError("eta_zeta_oracle cutoff must be >= 10");
  if (richardson_levels < 1 || richardson_levels > 8)
    throw ParameterError("eta_zeta_oracle richardson_levels must be in 1..8");

  const double q0 = spectrum.sigma + spectrum.shift / spectrum.scale;
  const double s = spectrum.scale;
  const int doublings = richardson_levels + 1; // need levels+1 partial sums
  const long long kmax = static_cast<long long>(cutoff) << (doublings - 1);

  const std::vector<double> zs = {0.2, 0.1, 0.05, 0.025, 0.0125, 0.00625};
  std::vector<double> extrapolated;
  extrapolated.reserve(zs.size());

  for (const double z : zs) {
    // partial sums over |k| <= cutoff * 2^m
    std::vector<double> partial;
    partial.reserve(static_cast<size_t>(doublings));
    double sum = 0.0;
    long long next_target = cutoff;
    const double lam0 = s * q0;
    if (std::abs(lam0) > kKernelTolerance * s)
      sum += std::copysign(std::pow(std::abs(lam0), -z), lam0);
    for (long long k = 1; k <= kmax; ++k) {
      const double lp = s * (static_cast<double>(k) + q0);
      const double lm = s * (static_cast<double>(-k) + q0);
      if (std::abs(lp) > kKernelTolerance * s)
        sum += std::copysign(std::pow(std::abs(lp), -z), lp);
      if (std::abs(lm) > kKernelTolerance * s)
        sum += std::copysign(std::pow(std::abs(lm), -z), lm);
      if (k == next_target) {
        partial.push_back(sum);
        next_target *= 2;
      }
    }
    // generalized Richardson in the cutoff, error exponents z, z+1, ...
    std::vector<double> r = partial;
    for (int level = 0; level < richardson_levels; ++level) {
      const double rho = std::pow(2.0, -(z + static_cast<double>(level)));
      std::vector<double> next(r.size() - 1);
      for (size_t m = 0; m + 1 < r.size(); ++m)
        next[m] = r[m + 1] + (r[m + 1] - r[m]) * rho / (1.0 - rho);
      r.swap(next);
    }
    extrapolated.push_back(r.back());
  }

  // sanity guard against extrapolation blow-up
  const double result = neville_to_zero(zs, extrapolated);
  const double last_node = extrapolated.back();
  if (!std::isfinite(result) || std::abs(result - last_node) > 0.5)
    throw AccuracyError("eta_zeta_oracle extrapolation diverged", last_node,
                        std::abs(result - last_node));
  return result;
}

double hurwitz_zeta_at_zero(double q) {
  if (!(q > 0.0 && q <= 1.0)) throw ParameterError("hurwitz_zeta_at_zero requires 0 < q <= 1");
  return 0.5 - q;
}

SpectrumSummary torus_summary(int spin) {
  if (spin < 0 || spin > 7) throw ParameterError("torus spin structure index must be 0..7");
  // spectrum symmetric about 0 for all structures; structure 0 carries the
  // one-dimensional kernel
  return TorusSummary{0.0, spin == 0 ? 1 : 0, spin};
}

double heisenberg_eta_smooth(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw ParameterError("heisenberg_eta_smooth requires positive a and b");
  const double r = b / a;
  const double r2 = r * r;
  return r2 * r2 / (96.0 * kPi * kPi);
}

} // namespace anomaly
