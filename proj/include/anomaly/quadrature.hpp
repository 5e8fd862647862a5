#pragma once

#include <functional>

namespace anomaly {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;   // absolute error estimate
  int evaluations = 0;
};

// Adaptive Gauss-Kronrod 7/15 on [a, b].  Bisects the worst interval until
// the summed error estimate drops below abs_tol; throws AccuracyError
// carrying the best value when the interval budget runs out.  Final
// reduction sums segments ordered by left endpoint, so results are
// deterministic.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a,
                                    double b, double abs_tol, int max_intervals = 4000);

} // namespace anomaly
