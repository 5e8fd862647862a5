#pragma once

#include <optional>
#include <string>
#include <vector>

#include "anomaly/forms.hpp"
#include "anomaly/model.hpp"

namespace anomaly {

struct ChargeReport {
  std::string model_kind;
  std::string model_descriptor;

  FormIntegral form_integral;
  double eta1 = 0.0, eta2 = 0.0;
  int h1 = 0, h2 = 0;

  double q_right = 0.0;
  double q_left = 0.0;   // assembled as -q_right
  double q_total = 0.0;  // exactly 0
  double q_chiral = 0.0; // 2 * q_right

  double nearest_integer_deviation = 0.0;
  bool anomalous = false; // integrality violated beyond 100x quadrature tol

  std::optional<long long> oracle_value; // projector trace, cylinder only

  // Heisenberg decomposition: smooth eta parts and the injected integer
  // offsets.  When the offsets are absent the report is flagged partial and
  // the charges are the offset-independent residuals.
  std::optional<double> eta_smooth_1, eta_smooth_2;
  std::optional<long long> n1, n2;
  bool partial = false;

  std::vector<std::string> warnings;
};

// Assembles Q_R = -(form integral) + (h1 - h2 + eta1 - eta2)/2 and the
// derived charges for the given model; requires product structure at the
// window ends.  Cylinder reports carry the projector-trace oracle value.
ChargeReport assemble_charges(const SpacetimeModel& model, double quadrature_tol);

struct CrossValidation {
  double formula_q_right;
  long long oracle_q_right;
  bool equal;
  bool boundary_case; // an endpoint eigenvalue sits on zero
};

// Charge formula vs projector trace on the cylinder; equal must hold at
// generic endpoints.  Endpoints on the spectral lattice are reported as a
// boundary-convention comparison, not a failure.
CrossValidation cross_validate_cylinder(const SpacetimeModel& model);

// (-1)^k * 2 * binomial(2k, k), exact; k >= 1.  Throws ParameterError when
// the value would overflow 64-bit integers (k > 30).
long long reference_sphere_charge(int k);

} // namespace anomaly
