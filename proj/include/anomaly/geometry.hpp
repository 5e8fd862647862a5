#pragma once

#include <array>

#include "anomaly/model.hpp"

namespace anomaly {

struct SpacetimePoint {
  double t = 0.0;
  double x = 0.0; // theta for the cylinder
  double y = 0.0;
  double z = 0.0;

  double coordinate(int i) const;
  SpacetimePoint shifted(int i, double delta) const;
};

// Dense symmetric matrix of dimension 2 or 4, row-major.
struct MetricMatrix {
  int dim = 4;
  std::array<double, 16> a{};

  double& operator()(int i, int j) { return a[static_cast<size_t>(4 * i + j)]; }
  double operator()(int i, int j) const { return a[static_cast<size_t>(4 * i + j)]; }
};

// Inverse by partial-pivot elimination; throws NumericError with a condition
// estimate when the matrix is numerically singular.
MetricMatrix invert_metric(const MetricMatrix& g);

using ChristoffelSymbols = std::array<std::array<std::array<double, 4>, 4>, 4>; // [mu][nu][rho]

struct CurvatureTensor {
  int dim = 4;
  // R^mu_{nu rho sigma}
  std::array<std::array<std::array<std::array<double, 4>, 4>, 4>, 4> r{};

  double max_antisymmetry_defect() const; // max |R^m_{n rs} + R^m_{n sr}|
  double max_abs() const;
  double first_bianchi_residual() const;  // max |R^m_{[nrs]}| * 3
};

// Default finite-difference step: eps^(1/6), balanced for the nested
// second-derivative pipeline behind the curvature tensor.
double default_fd_step();

MetricMatrix metric_at(const SpacetimeModel& model, const SpacetimePoint& p);

// Levi-Civita connection coefficients from 4th-order central differences of
// metric_at with one Richardson level.
ChristoffelSymbols christoffel_at(const SpacetimeModel& model, const SpacetimePoint& p,
                                  double step);

CurvatureTensor curvature_at(const SpacetimeModel& model, const SpacetimePoint& p,
                             double step);

// Coefficient of dt^dx^dy^dz in (1/192 pi^2) tr(R^R), by explicit
// antisymmetrized contraction of the curvature tensor.  Returns 0 for the
// 2D cylinder (no degree-4 form in two dimensions).
double ahat_density_at(const SpacetimeModel& model, const SpacetimePoint& p, double step);

// Closed-form degree-4 density for the Heisenberg metric family, as a
// function of the second-order jet of (a, b).
double ahat_density_closed_bianchi2(double a, double da, double dda, double b, double db,
                                    double ddb);

} // namespace anomaly
