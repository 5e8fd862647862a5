#include "anomaly/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>

#include "anomaly/errors.hpp"

namespace anomaly {

double SpacetimePoint::coordinate(int i) const {
  switch (i) {
    case 0: return t;
    case 1: return x;
    case 2: return y;
    default: return i == 3 ? z : throw ParameterError("coordinate index out of range");
  }
}

SpacetimePoint SpacetimePoint::shifted(int i, double delta) const {
  SpacetimePoint q = *this;
  switch (i) {
    case 0: q.t += delta; break;
    case 1: q.x += delta; break;
    case 2: q.y += delta; break;
    case 3: q.z += delta; break;
    default: throw ParameterError("coordinate index out of range");
  }
  return q;
}

double default_fd_step() {
  static const double step = std::pow(std::numeric_limits<double>::epsilon(), 1.0 / 6.0);
  return step;
}

MetricMatrix metric_at(const SpacetimeModel& model, const SpacetimePoint& p) {
  MetricMatrix g;
  if (model.is<Cylinder>()) {
    g.dim = 2;
    g(0, 0) = 1.0;
    g(1, 1) = -1.0;
    return g;
  }
  if (const auto* b = model.get_if<BianchiI>()) {
    g.dim = 4;
    const double a1 = b->a1.value(p.t), a2 = b->a2.value(p.t), a3 = b->a3.value(p.t);
    g(0, 0) = 1.0;
    g(1, 1) = -a1 * a1;
    g(2, 2) = -a2 * a2;
    g(3, 3) = -a3 * a3;
    return g;
  }
  if (const auto* b2 = model.get_if<BianchiII>()) {
    g.dim = 4;
    const double a = b2->a.value(p.t), b = b2->b.value(p.t);
    const double a2 = a * a, bb = b * b;
    // spatial block: left-invariant Heisenberg metric
    // a^2(dx^2+dy^2) + b^2 (dz + (y dx - x dy)/2)^2
    g(0, 0) = 1.0;
    g(1, 1) = -(bb * p.y * p.y / 4.0 + a2);
    g(2, 2) = -(bb * p.x * p.x / 4.0 + a2);
    g(3, 3) = -bb;
    g(1, 2) = g(2, 1) = bb * p.x * p.y / 4.0;
    g(1, 3) = g(3, 1) = -bb * p.y / 2.0;
    g(2, 3) = g(3, 2) = bb * p.x / 2.0;
    return g;
  }
  throw UnsupportedModelError("metric_at: sphere reference model carries no metric chart");
}

MetricMatrix invert_metric(const MetricMatrix& g) {
  const int n = g.dim;
  // augmented Gauss-Jordan with partial pivoting
  double m[4][8] = {};
  double max_in = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      m[i][j] = g(i, j);
      max_in = std::max(max_in, std::abs(m[i][j]));
    }
    m[i][n + i] = 1.0;
  }
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (std::abs(m[piv][col]) < 1e-14 * std::max(1.0, max_in)) {
      throw NumericError("singular metric",
                         max_in / std::max(std::abs(m[piv][col]), 1e-300));
    }
    if (piv != col)
      for (int j = 0; j < 2 * n; ++j) std::swap(m[piv][j], m[col][j]);
    const double inv = 1.0 / m[col][col];
    for (int j = 0; j < 2 * n; ++j) m[col][j] *= inv;
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = m[r][col];
      if (f == 0.0) continue;
      for (int j = 0; j < 2 * n; ++j) m[r][j] -= f * m[col][j];
    }
  }
  MetricMatrix out;
  out.dim = n;
  double max_out = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      out(i, j) = m[i][n + j];
      max_out = std::max(max_out, std::abs(out(i, j)));
    }
  if (!(max_in * max_out < 1e12))
    throw NumericError("metric too ill-conditioned", max_in * max_out);
  return out;
}

namespace {

// Derivatives use a 4th-order central stencil with one Richardson level:
// samples at +-h/2, +-h, +-2h of each direction.
using MetricDerivatives = std::array<MetricMatrix, 4>; // [lambda](i,j) = d_lambda g_ij

MetricDerivatives metric_derivatives(const SpacetimeModel& model, const SpacetimePoint& p,
                                     double step) {
  MetricDerivatives dg;
  const int n = metric_at(model, p).dim;
  for (int lam = 0; lam < n; ++lam) {
    dg[lam].dim = n;
    // one stencil sweep per direction, reusing whole-matrix evaluations
    std::array<std::pair<double, MetricMatrix>, 6> samples;
    const double offsets[6] = {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0};
    for (int s = 0; s < 6; ++s) {
      const double d = offsets[s] * step;
      samples[s] = {d, metric_at(model, p.shifted(lam, d))};
    }
    const auto entry = [&](int s, int i, int j) { return samples[s].second(i, j); };
    // differences are taken before scaling so the stencil is exactly zero on
    // locally constant data
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double coarse = ((entry(0, i, j) - entry(5, i, j)) +
                               8.0 * (entry(4, i, j) - entry(1, i, j))) /
                              (12.0 * step);
        const double fine = ((entry(1, i, j) - entry(4, i, j)) +
                             8.0 * (entry(3, i, j) - entry(2, i, j))) /
                            (6.0 * step);
        dg[lam](i, j) = (16.0 * fine - coarse) / 15.0;
      }
  }
  return dg;
}

constexpr double kPi = 3.14159265358979323846;

} // namespace

ChristoffelSymbols christoffel_at(const SpacetimeModel& model, const SpacetimePoint& p,
                                  double step) {
  if (!(step > 0.0)) throw ParameterError("finite-difference step must be positive");
  const MetricMatrix g = metric_at(model, p);
  const MetricMatrix ginv = invert_metric(g);
  const MetricDerivatives dg = metric_derivatives(model, p, step);
  const int n = g.dim;

  ChristoffelSymbols gamma{};
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu)
      for (int rho = nu; rho < n; ++rho) {
        double s = 0.0;
        for (int lam = 0; lam < n; ++lam)
          s += ginv(mu, lam) * (dg[nu](lam, rho) + dg[rho](lam, nu) - dg[lam](nu, rho));
        gamma[mu][nu][rho] = 0.5 * s;
        gamma[mu][rho][nu] = gamma[mu][nu][rho];
      }
  return gamma;
}

CurvatureTensor curvature_at(const SpacetimeModel& model, const SpacetimePoint& p,
                             double step) {
  const int n = metric_at(model, p).dim;
  const ChristoffelSymbols at_p = christoffel_at(model, p, step);

  // d_rho Gamma^mu_{nu sigma} with the same stencil as the metric derivatives
  std::array<ChristoffelSymbols, 4> dgamma{};
  for (int rho = 0; rho < n; ++rho) {
    std::array<ChristoffelSymbols, 6> samples;
    const double offsets[6] = {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0};
    for (int s = 0; s < 6; ++s)
      samples[s] = christoffel_at(model, p.shifted(rho, offsets[s] * step), step);
    for (int mu = 0; mu < n; ++mu)
      for (int nu = 0; nu < n; ++nu)
        for (int sig = 0; sig < n; ++sig) {
          const auto e = [&](int s) { return samples[s][mu][nu][sig]; };
          const double coarse = ((e(0) - e(5)) + 8.0 * (e(4) - e(1))) / (12.0 * step);
          const double fine = ((e(1) - e(4)) + 8.0 * (e(3) - e(2))) / (6.0 * step);
          dgamma[rho][mu][nu][sig] = (16.0 * fine - coarse) / 15.0;
        }
  }

  CurvatureTensor out;
  out.dim = n;
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu)
      for (int rho = 0; rho < n; ++rho)
        for (int sig = 0; sig < n; ++sig) {
          double r = dgamma[rho][mu][nu][sig] - dgamma[sig][mu][nu][rho];
          for (int lam = 0; lam < n; ++lam)
            r += at_p[mu][lam][rho] * at_p[lam][nu][sig] -
                 at_p[mu][lam][sig] * at_p[lam][nu][rho];
          out.r[mu][nu][rho][sig] = r;
        }
  return out;
}

double CurvatureTensor::max_antisymmetry_defect() const {
  double worst = 0.0;
  for (int mu = 0; mu < dim; ++mu)
    for (int nu = 0; nu < dim; ++nu)
      for (int rho = 0; rho < dim; ++rho)
        for (int sig = 0; sig < dim; ++sig)
          worst = std::max(worst, std::abs(r[mu][nu][rho][sig] + r[mu][nu][sig][rho]));
  return worst;
}

double CurvatureTensor::max_abs() const {
  double worst = 0.0;
  for (int mu = 0; mu < dim; ++mu)
    for (int nu = 0; nu < dim; ++nu)
      for (int rho = 0; rho < dim; ++rho)
        for (int sig = 0; sig < dim; ++sig)
          worst = std::max(worst, std::abs(r[mu][nu][rho][sig]));
  return worst;
}

double CurvatureTensor::first_bianchi_residual() const {
  double worst = 0.0;
  for (int mu = 0; mu < dim; ++mu)
    for (int nu = 0; nu < dim; ++nu)
      for (int rho = 0; rho < dim; ++rho)
        for (int sig = 0; sig < dim; ++sig) {
          const double cyc =
              r[mu][nu][rho][sig] + r[mu][rho][sig][nu] + r[mu][sig][nu][rho];
          worst = std::max(worst, std::abs(cyc));
        }
  return worst;
}

namespace {

struct Permutation {
  int idx[4];
  int sign;
};

// all permutations of (0,1,2,3) with parity
const std::array<Permutation, 24>& permutations4() {
  static const std::array<Permutation, 24> table = [] {
    std::array<Permutation, 24> out{};
    std::array<int, 4> a = {0, 1, 2, 3};
    int pos = 0;
    do {
      Permutation p{};
      int inversions = 0;
      for (int i = 0; i < 4; ++i) {
        p.idx[i] = a[static_cast<size_t>(i)];
        for (int j = i + 1; j < 4; ++j)
          if (a[static_cast<size_t>(i)] > a[static_cast<size_t>(j)]) ++inversions;
      }
      p.sign = (inversions % 2 == 0) ? 1 : -1;
      out[static_cast<size_t>(pos++)] = p;
    } while (std::next_permutation(a.begin(), a.end()));
    return out;
  }();
  return table;
}

} // namespace

double ahat_density_at(const SpacetimeModel& model, const SpacetimePoint& p, double step) {
  if (model.is<SphereReference>())
    throw UnsupportedModelError("ahat_density_at: sphere reference model carries no chart");
  if (model.dimension() == 2) return 0.0; // no degree-4 form in 2D

  const CurvatureTensor R = curvature_at(model, p, step);
  double sum = 0.0;
  for (const Permutation& perm : permutations4()) {
    const int mu = perm.idx[0], nu = perm.idx[1], rho = perm.idx[2], sig = perm.idx[3];
    double tr = 0.0;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) tr += R.r[a][b][mu][nu] * R.r[b][a][rho][sig];
    sum += perm.sign * tr;
  }
  return sum / 4.0 / (192.0 * kPi * kPi);
}

double ahat_density_closed_bianchi2(double a, double da, double dda, double b, double db,
                                    double ddb) {
  if (!(a > 0.0)) throw ParameterError("ahat_density_closed_bianchi2 requires a > 0");
  const double a2 = a * a, a3 = a2 * a, a4 = a3 * a, a5 = a4 * a;
  const double numerator =
      (a2 * b * da * da - a3 * b * dda - a3 * da * db + a4 * ddb - b * b * b) *
      (b * da - a * db);
  return numerator / (48.0 * kPi * kPi * a5);
}

} // namespace anomaly
