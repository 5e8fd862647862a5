#include "anomaly/flow.hpp"

#include <algorithm>
#include <cmath>

#include "anomaly/errors.hpp"
#include "anomaly/spectral.hpp"

namespace anomaly {

ModeFamily mode_family_cylinder(const SpacetimeModel& model) {
  const auto* c = model.get_if<Cylinder>();
  if (!c)
    throw UnsupportedModelError(
        "mode_family_cylinder: only the cylinder evolution decouples into modes");

  ModeFamily family;
  family.scale = 6.28318530717958647692 / c->circumference;
  family.sigma = (c->spin == CircleSpin::trivial) ? 0.0 : 0.5;
  const Profile gauge = c->gauge;
  family.gauge = [gauge](double t) { return gauge.value(t); };

  double bound = 0.0;
  constexpr int kSamples = 257;
  const TimeWindow w = c->window;
  for (int i = 0; i < kSamples; ++i) {
    const double t = w.t1 + w.length() * static_cast<double>(i) / (kSamples - 1);
    bound = std::max(bound, std::abs(gauge.value(t)));
  }
  family.gauge_bound = bound;
  return family;
}

namespace {

long long indicator_sum(const ModeFamily& family, double t1, double t2, long long cutoff,
                        bool* boundary_hit) {
  const double tol = kKernelTolerance * family.scale;
  long long sum = 0;
  for (long long k = -cutoff; k <= cutoff; ++k) {
    const double l1 = family.eigenvalue(k, t1);
    const double l2 = family.eigenvalue(k, t2);
    if (std::abs(l1) < tol || std::abs(l2) < tol) *boundary_hit = true;
    sum += (l1 >= 0.0 ? 1 : 0) - (l2 >= 0.0 ? 1 : 0);
  }
  return sum;
}

} // namespace

TraceResult projector_trace(const ModeFamily& family, double t1, double t2) {
  // antisymmetric in (t1, t2) by construction; t1 < t2 is the physical case
  // modes with |k + sigma| > gauge_bound/scale never change sign, so the sum
  // has finite support; start just beyond it and keep doubling
  long long cutoff =
      std::max<long long>(16, static_cast<long long>(family.gauge_bound / family.scale) + 2);

  TraceResult result;
  bool boundary_hit = false;
  long long value = indicator_sum(family, t1, t2, cutoff, &boundary_hit);
  int stable_span = 0;
  constexpr int kRequiredSpan = 3;
  constexpr long long kMaxCutoff = 1LL << 24;

  while (stable_span < kRequiredSpan) {
    if (cutoff > kMaxCutoff)
      throw AccuracyError("projector_trace did not stabilize", static_cast<double>(value), 1.0);
    cutoff *= 2;
    const long long next = indicator_sum(family, t1, t2, cutoff, &boundary_hit);
    stable_span = (next == value) ? stable_span + 1 : 0;
    value = next;
  }

  result.value = value;
  result.cutoff_used = cutoff;
  result.stabilization_span = stable_span;
  if (boundary_hit)
    result.warnings.push_back(
        "eigenvalue on the zero boundary; >= convention applied at both endpoints");
  return result;
}

long long spectral_flow(const ModeFamily& family, double t1, double t2, int samples) {
  if (samples < 2) throw ParameterError("spectral_flow requires samples >= 2");

  const long long cutoff =
      std::max<long long>(16, static_cast<long long>(family.gauge_bound / family.scale) + 2);

  const auto nonneg = [](double v) { return v >= 0.0; };
  long long total = 0;

  for (long long k = -cutoff; k <= cutoff; ++k) {
    const auto lambda = [&](double t) { return family.eigenvalue(k, t); };
    for (int i = 0; i + 1 < samples; ++i) {
      const double ta = t1 + (t2 - t1) * static_cast<double>(i) / (samples - 1);
      const double tb = t1 + (t2 - t1) * static_cast<double>(i + 1) / (samples - 1);
      const bool sa = nonneg(lambda(ta));
      const bool sb = nonneg(lambda(tb));
      const bool sm = nonneg(lambda(0.5 * (ta + tb)));
      if (sa == sb) {
        if (sm != sa)
          throw AccuracyError(
              "branch changes sign twice between adjacent samples; increase samples",
              static_cast<double>(total), 1.0);
        continue;
      }
      // bisection refinement of the crossing
      double lo = ta, hi = tb;
      for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (std::abs(lambda(mid)) < kKernelTolerance) break;
        if (nonneg(lambda(mid)) == sa)
          lo = mid;
        else
          hi = mid;
      }
      // leaving the nonnegative set counts +1, entering counts -1
      total += sa ? +1 : -1;
    }
  }
  return total;
}

} // namespace anomaly
