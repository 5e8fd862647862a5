#pragma once

#include <variant>

#include "anomaly/model.hpp"

namespace anomaly {

// Eigenvalues lambda_k = scale*(k + sigma) + shift, k in Z, all simple.
struct ArithmeticSpectrum {
  double scale; // > 0
  double sigma; // 0 or 1/2
  double shift;

  double eigenvalue(long long k) const { return scale * (static_cast<double>(k) + sigma) + shift; }
};

struct EtaResult {
  double eta;
  int h;          // kernel dimension, 0 or 1 for arithmetic spectra
  double reduced; // (eta + h)/2 mod 1
};

struct TorusSummary {
  double eta; // identically 0
  int h;
  int spin;
};

struct HeisenbergSmoothSummary {
  double a;
  double b;
  double eta_smooth; // b^4 / (96 pi^2 a^4); integer offset not included
};

using SpectrumSummary = std::variant<TorusSummary, HeisenbergSmoothSummary>;

// Eigenvalues within this relative distance of zero count as kernel modes.
inline constexpr double kKernelTolerance = 1e-12;

// Spectrum of the circle Dirac operator i d/dtheta - A1 (conjugate=false) or
// of its charge conjugate i d/dtheta + A1 (conjugate=true).
ArithmeticSpectrum circle_spectrum(double circumference, CircleSpin spin, double gauge_value,
                                   bool conjugate);

// Closed-form eta invariant: with q = frac(sigma + shift/scale), eta = 1 - 2q
// and h = 0, except q = 0 where the spectrum is symmetric apart from a
// single zero mode (eta = 0, h = 1).
EtaResult eta_closed(const ArithmeticSpectrum& spectrum);

// Zeta-regularized numerical estimate: partial sums of sign(l)|l|^-z over
// |k| <= cutoff*2^m, accelerated in the cutoff by generalized Richardson
// steps with exponents z, z+1, ... and in z by polynomial extrapolation to
// z = 0.  Accurate to ~1e-9 for frac(sigma + shift/scale) in [0.05, 0.95];
// documented target 1e-6.  Zero modes are excluded from the sums.
double eta_zeta_oracle(const ArithmeticSpectrum& spectrum, int cutoff = 2048,
                       int richardson_levels = 3);

// zeta_H(0, q) = 1/2 - q for 0 < q <= 1.
double hurwitz_zeta_at_zero(double q);

// Flat 3-torus facts: eta = 0 for every spin structure; the kernel is
// one-dimensional for structure 0 and trivial otherwise.
SpectrumSummary torus_summary(int spin);

// Smooth part of the Heisenberg-manifold eta invariant; the integer offset
// is an external input and is never computed here.
double heisenberg_eta_smooth(double a, double b);

} // namespace anomaly
