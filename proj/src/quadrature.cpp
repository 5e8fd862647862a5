#include "anomaly/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "anomaly/errors.hpp"

namespace anomaly {

namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1] (QUADPACK dqk15 values).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b;
  double value;
  double error;
};

Segment evaluate_segment(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double fc = f(center);
  double result_kronrod = fc * kWgk[7];
  double result_gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    result_kronrod += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) result_gauss += kWg[j / 2] * (f1 + f2);
  }

  Segment s;
  s.a = a;
  s.b = b;
  s.value = result_kronrod * half;
  const double diff = std::abs(result_kronrod - result_gauss) * half;
  // QUADPACK-style error sharpening
  s.error = diff;
  if (diff > 0.0) s.error = std::min(diff, 200.0 * diff * std::sqrt(diff / std::max(1e-300, std::abs(s.value) + diff)));
  s.error = std::max(s.error, std::abs(s.value) * 1e-15);
  if (!std::isfinite(s.value) || !std::isfinite(s.error))
    s.error = std::numeric_limits<double>::infinity(); // singular sample: force refinement
  return s;
}

} // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a,
                                    double b, double abs_tol, int max_intervals) {
  if (!(abs_tol > 0.0)) throw ParameterError("quadrature tolerance must be positive");
  if (a == b) return {0.0, 0.0, 0};

  std::vector<Segment> segments;
  segments.push_back(evaluate_segment(f, a, b));
  int evaluations = 15;

  const auto total_error = [&] {
    double e = 0.0;
    for (const Segment& s : segments) e += s.error;
    return e;
  };

  while (total_error() > abs_tol && static_cast<int>(segments.size()) < max_intervals) {
    // split the worst segment; ties broken by left endpoint for determinism
    size_t worst = 0;
    for (size_t i = 1; i < segments.size(); ++i) {
      if (segments[i].error > segments[worst].error ||
          (segments[i].error == segments[worst].error && segments[i].a < segments[worst].a))
        worst = i;
    }
    const Segment s = segments[worst];
    const double mid = 0.5 * (s.a + s.b);
    if (mid == s.a || mid == s.b) break; // interval exhausted at machine precision
    segments[worst] = evaluate_segment(f, s.a, mid);
    segments.push_back(evaluate_segment(f, mid, s.b));
    evaluations += 30;
  }

  std::sort(segments.begin(), segments.end(),
            [](const Segment& l, const Segment& r) { return l.a < r.a; });
  QuadratureResult out;
  for (const Segment& s : segments) {
    out.value += s.value;
    out.error += s.error;
  }
  out.evaluations = evaluations;

  if (out.error > abs_tol)
    throw AccuracyError("adaptive quadrature did not reach the requested tolerance",
                        out.value, out.error);
  return out;
}

} // namespace anomaly
