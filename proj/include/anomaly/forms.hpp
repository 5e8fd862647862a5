#pragma once

#include "anomaly/geometry.hpp"
#include "anomaly/model.hpp"

namespace anomaly {

struct FormIntegral {
  double value = 0.0;
  double estimated_error = 0.0;
  int evaluations = 0;
};

// Gauge flux through the cylinder: (L/2pi)(A1(t2) - A1(t1)).  Computed both
// from the profile endpoint values and by quadrature of the field strength;
// the discrepancy is recorded as estimated_error.
FormIntegral chern_flux_cylinder(const SpacetimeModel& model);

// Integral of the characteristic form over the region between the two
// hypersurfaces.  Cylinder: delegates to chern_flux_cylinder.  Bianchi
// models: the density is spatially constant (left invariance), so the 4D
// integral reduces to a 1D t-quadrature times unit coordinate volume of the
// fundamental domain, taken with the orientation fixed in
// docs/conventions.md.
FormIntegral index_form_integral(const SpacetimeModel& model, double tol);

// Orientation of the fundamental domain of the spatial factor relative to
// the coordinate chart (t,x,y,z); see docs/conventions.md.
inline constexpr double kBianchiOrientation = -1.0;

} // namespace anomaly
