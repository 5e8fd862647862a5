#pragma once

#include <functional>
#include <string>
#include <vector>

#include "anomaly/model.hpp"

namespace anomaly {

// Decoupled eigenvalue branches lambda_k(t) = scale*(k + sigma) + gauge(t)
// of the conjugate circle operator family.
struct ModeFamily {
  double scale;
  double sigma;
  std::function<double(double)> gauge;
  double gauge_bound; // max |gauge| over the window, for cutoff seeding

  double eigenvalue(long long k, double t) const {
    return scale * (static_cast<double>(k) + sigma) + gauge(t);
  }
};

struct TraceResult {
  long long value = 0;
  long long cutoff_used = 0;
  int stabilization_span = 0; // consecutive cutoff doublings with equal sum
  std::vector<std::string> warnings;
};

ModeFamily mode_family_cylinder(const SpacetimeModel& model);

// Stabilized mode sum of 1(lambda_k(t1) >= 0) - 1(lambda_k(t2) >= 0):
// the cutoff doubles until the partial sum is unchanged over at least three
// consecutive doublings.  Eigenvalues within kKernelTolerance*scale of zero
// at either endpoint attach a boundary-convention warning; the value is
// still returned with the >= convention.
TraceResult projector_trace(const ModeFamily& family, double t1, double t2);

// Net signed count of branch zero-crossings on a refined t-grid; a crossing
// where the branch leaves the nonnegative set counts +1, one where it
// enters counts -1, so the total equals projector_trace whenever branches
// are monotone between samples.  A branch changing sign twice between
// adjacent samples raises AccuracyError (increase samples).
long long spectral_flow(const ModeFamily& family, double t1, double t2, int samples);

} // namespace anomaly
