#include "anomaly/forms.hpp"

#include <cmath>

#include "anomaly/errors.hpp"
#include "anomaly/quadrature.hpp"

namespace anomaly {

namespace {
constexpr double kTwoPi = 6.28318530717958647692;
}

FormIntegral chern_flux_cylinder(const SpacetimeModel& model) {
  const auto* c = model.get_if<Cylinder>();
  if (!c) throw UnsupportedModelError("chern_flux_cylinder requires a cylinder model");

  const double factor = c->circumference / kTwoPi;
  const double closed =
      factor * (c->gauge.value(c->window.t2) - c->gauge.value(c->window.t1));

  const auto field_strength = [&](double t) { return factor * c->gauge.derivative(t); };
  const QuadratureResult quad =
      integrate_adaptive(field_strength, c->window.t1, c->window.t2,
                         1e-12 * std::max(1.0, std::abs(closed)) + 1e-14);

  FormIntegral out;
  out.value = closed;
  out.estimated_error = std::abs(closed - quad.value);
  out.evaluations = quad.evaluations;
  return out;
}

FormIntegral index_form_integral(const SpacetimeModel& model, double tol) {
  if (!(tol > 0.0)) throw ParameterError("index_form_integral tolerance must be positive");
  if (model.is<Cylinder>()) return chern_flux_cylinder(model);
  if (model.is<SphereReference>())
    throw UnsupportedModelError("index_form_integral: sphere reference has no chart");

  const TimeWindow w = *model.window();
  const double step = default_fd_step();
  // spatial homogeneity: density is independent of (x,y,z), so the integral
  // over the unit fundamental domain reduces to a t-line integral
  const auto density = [&](double t) {
    return ahat_density_at(model, SpacetimePoint{t, 0.0, 0.0, 0.0}, step);
  };
  const QuadratureResult quad = integrate_adaptive(density, w.t1, w.t2, tol);

  FormIntegral out;
  out.value = kBianchiOrientation * quad.value;
  out.estimated_error = quad.error;
  out.evaluations = quad.evaluations;
  return out;
}

} // namespace anomaly
