#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "anomaly/errors.hpp"
#include "anomaly/spectral.hpp"
#include "support.hpp"

using namespace anomaly;

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
} // namespace

TEST_CASE("circle_spectrum: eigenvalue lattices for both structures") {
  SUBCASE("trivial structure, no gauge: integers") {
    const ArithmeticSpectrum s = circle_spectrum(kTwoPi, CircleSpin::trivial, 0.0, false);
    CHECK(s.scale == doctest::Approx(1.0));
    CHECK(s.sigma == 0.0);
    CHECK(s.eigenvalue(3) == doctest::Approx(3.0));
    CHECK(s.eigenvalue(-2) == doctest::Approx(-2.0));
  }
  SUBCASE("nontrivial structure: half-integers") {
    const ArithmeticSpectrum s = circle_spectrum(kTwoPi, CircleSpin::nontrivial, 0.0, false);
    CHECK(s.eigenvalue(0) == doctest::Approx(0.5));
    CHECK(s.eigenvalue(-1) == doctest::Approx(-0.5));
  }
  SUBCASE("gauge coupling signs: plain carries -A1, conjugate carries +A1") {
    const ArithmeticSpectrum plain = circle_spectrum(kTwoPi, CircleSpin::trivial, 0.25, false);
    CHECK(plain.eigenvalue(0) == doctest::Approx(-0.25));
    const ArithmeticSpectrum conj = circle_spectrum(kTwoPi, CircleSpin::trivial, 0.25, true);
    CHECK(conj.eigenvalue(0) == doctest::Approx(0.25));
    CHECK(conj.eigenvalue(1) == doctest::Approx(1.25));
  }
  SUBCASE("circumference sets the lattice spacing") {
    const ArithmeticSpectrum s = circle_spectrum(kPi, CircleSpin::trivial, 0.0, false);
    CHECK(s.scale == doctest::Approx(2.0));
  }
  CHECK_THROWS_AS(circle_spectrum(0.0, CircleSpin::trivial, 0.0, false), ParameterError);
}

TEST_CASE("eta_closed: symmetric spectra and the quarter-shift example") {
  SUBCASE("half-integer lattice is symmetric") {
    const EtaResult e = eta_closed({1.0, 0.5, 0.0});
    CHECK(e.eta == 0.0);
    CHECK(e.h == 0);
  }
  SUBCASE("integer lattice has a zero mode") {
    const EtaResult e = eta_closed({1.0, 0.0, 0.0});
    CHECK(e.eta == 0.0);
    CHECK(e.h == 1);
  }
  SUBCASE("shift 0.25 gives eta = 1/2 and the floor identity") {
    const EtaResult e = eta_closed({1.0, 0.0, 0.25});
    CHECK(e.eta == doctest::Approx(0.5));
    CHECK(e.h == 0);
    // 2x + h + eta = 2 floor(x) + 1 at x = 0.25
    CHECK(2.0 * 0.25 + e.h + e.eta == doctest::Approx(1.0));
  }
}

TEST_CASE("eta_closed: scale invariance and integer-shift invariance") {
  testsupport::Rng rng(101);
  for (int i = 0; i < 200; ++i) {
    const double s = rng.uniform(0.1, 7.0);
    const double sigma = rng.coin() ? 0.0 : 0.5;
    const double c = rng.uniform(-10.0, 10.0);
    const EtaResult base = eta_closed({s, sigma, c});

    const double lambda = rng.uniform(0.2, 5.0);
    const EtaResult scaled = eta_closed({lambda * s, sigma, lambda * c});
    CHECK(scaled.eta == doctest::Approx(base.eta).epsilon(1e-12));
    CHECK(scaled.h == base.h);

    const double shifted_c = c + s * static_cast<double>(rng.integer(-3, 3));
    const EtaResult shifted = eta_closed({s, sigma, shifted_c});
    CHECK(shifted.eta == doctest::Approx(base.eta).epsilon(1e-9));
    CHECK(shifted.h == base.h);
  }
}

TEST_CASE("eta_closed: conjugation antisymmetry off the lattice") {
  testsupport::Rng rng(103);
  for (int i = 0; i < 200; ++i) {
    const double s = rng.uniform(0.3, 5.0);
    const double sigma = rng.coin() ? 0.0 : 0.5;
    double c = rng.uniform(-4.0, 4.0);
    if (testsupport::frac_distance_to_integers(sigma + c / s) < 1e-6) continue;
    const EtaResult plus = eta_closed({s, sigma, c});
    // mirrored spectrum: sigma -> -sigma mod 1 (same set for 0 and 1/2), c -> -c
    const EtaResult minus = eta_closed({s, sigma == 0.0 ? 0.0 : 0.5, -c});
    CHECK(plus.eta == doctest::Approx(-minus.eta).epsilon(1e-12));
  }
}

TEST_CASE("eta_closed: jump of 2 across a lattice crossing, h spikes to 1") {
  const double s = 1.0;
  const double eps = 1e-9;
  const EtaResult below = eta_closed({s, 0.0, 2.0 - eps});
  const EtaResult at = eta_closed({s, 0.0, 2.0});
  const EtaResult above = eta_closed({s, 0.0, 2.0 + eps});
  CHECK(at.h == 1);
  CHECK(at.eta == 0.0);
  CHECK(below.h == 0);
  CHECK(above.h == 0);
  CHECK(above.eta - below.eta == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("hurwitz_zeta_at_zero: classical values") {
  CHECK(hurwitz_zeta_at_zero(0.5) == 0.0);
  CHECK(hurwitz_zeta_at_zero(1.0) == doctest::Approx(-0.5));
  CHECK(hurwitz_zeta_at_zero(0.25) == doctest::Approx(0.25));
  CHECK_THROWS_AS(hurwitz_zeta_at_zero(0.0), ParameterError);
  CHECK_THROWS_AS(hurwitz_zeta_at_zero(1.5), ParameterError);
}

TEST_CASE("hurwitz floor identity for the trivial structure, 1000 random gauge values") {
  testsupport::Rng rng(107);
  int tested = 0;
  while (tested < 1000) {
    const double circumference = rng.uniform(1.0, 10.0);
    const double a1 = rng.uniform(-5.0, 5.0);
    const double x = circumference / kTwoPi * a1;
    if (testsupport::frac_distance_to_integers(x) < 1e-9) continue;
    const EtaResult e = eta_closed(circle_spectrum(circumference, CircleSpin::trivial, a1, true));
    const double lhs = 2.0 * x + e.h + e.eta;
    const double rhs = 2.0 * std::floor(x) + 1.0;
    CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(rhs)));
    ++tested;
  }
}

TEST_CASE("nontrivial-structure analogue: 2x + h + eta = 2 floor(x - 1/2) + 2") {
  testsupport::Rng rng(109);
  int tested = 0;
  while (tested < 500) {
    const double circumference = rng.uniform(1.0, 10.0);
    const double a1 = rng.uniform(-5.0, 5.0);
    const double x = circumference / kTwoPi * a1;
    if (testsupport::frac_distance_to_integers(x + 0.5) < 1e-9) continue;
    const EtaResult e =
        eta_closed(circle_spectrum(circumference, CircleSpin::nontrivial, a1, true));
    const double lhs = 2.0 * x + e.h + e.eta;
    const double rhs = 2.0 * std::floor(x - 0.5) + 2.0;
    CHECK(std::abs(lhs - rhs) < 1e-11 * std::max(1.0, std::abs(rhs)));
    ++tested;
  }
}

TEST_CASE("eta_zeta_oracle agrees with eta_closed") {
  SUBCASE("symmetric spectrum") {
    CHECK(std::abs(eta_zeta_oracle({1.0, 0.5, 0.0})) < 1e-6);
  }
  SUBCASE("quarter shift") {
    CHECK(eta_zeta_oracle({1.0, 0.0, 0.25}) == doctest::Approx(0.5).epsilon(1e-6));
  }
  SUBCASE("rescaled quarter shift") {
    CHECK(eta_zeta_oracle({2.0, 0.0, 0.5}) == doctest::Approx(0.5).epsilon(1e-6));
  }
  SUBCASE("100 random spectra, frac in [0.05, 0.95]") {
    testsupport::Rng rng(113);
    for (int i = 0; i < 100; ++i) {
      const double s = rng.uniform(0.5, 8.0);
      const double sigma = rng.coin() ? 0.0 : 0.5;
      const double q = rng.uniform(0.05, 0.95);
      const double c = (q - sigma + static_cast<double>(rng.integer(-3, 3))) * s;
      const ArithmeticSpectrum spectrum{s, sigma, c};
      const double oracle = eta_zeta_oracle(spectrum);
      const double closed = eta_closed(spectrum).eta;
      CHECK(std::abs(oracle - closed) < 1e-6);
    }
  }
  SUBCASE("parameter validation") {
    CHECK_THROWS_AS(eta_zeta_oracle({1.0, 0.0, 0.25}, 4), ParameterError);
    CHECK_THROWS_AS(eta_zeta_oracle({1.0, 0.0, 0.25}, 2048, 0), ParameterError);
  }
}

TEST_CASE("torus_summary: eta vanishes, structure 0 carries the kernel") {
  for (int spin = 0; spin < 8; ++spin) {
    const auto summary = std::get<TorusSummary>(torus_summary(spin));
    CHECK(summary.eta == 0.0);
    CHECK(summary.h == (spin == 0 ? 1 : 0));
  }
  CHECK_THROWS_AS(torus_summary(8), ParameterError);
}

TEST_CASE("heisenberg_eta_smooth values") {
  CHECK(heisenberg_eta_smooth(1.0, 1.0) == doctest::Approx(1.0 / (96.0 * kPi * kPi)));
  CHECK(heisenberg_eta_smooth(1.0, 2.0) == doctest::Approx(1.0 / (6.0 * kPi * kPi)));
  // depends only on the ratio b/a
  CHECK(heisenberg_eta_smooth(2.0, 2.0) == doctest::Approx(heisenberg_eta_smooth(1.0, 1.0)));
  CHECK_THROWS_AS(heisenberg_eta_smooth(0.0, 1.0), ParameterError);
  CHECK_THROWS_AS(heisenberg_eta_smooth(1.0, -1.0), ParameterError);
}
