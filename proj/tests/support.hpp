#pragma once

#include <cmath>
#include <cstdint>

#include "anomaly/model.hpp"

namespace testsupport {

// splitmix64-backed uniform draws; identical across platforms, unlike the
// std:: distributions.
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed + 0x9E3779B97F4A7C15ULL) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double uniform(double lo, double hi) {
    const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

  bool coin() { return (next_u64() & 1ULL) != 0ULL; }

  long long integer(long long lo, long long hi) { // inclusive
    return lo + static_cast<long long>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }
};

inline double frac_distance_to_integers(double x) {
  const double q = x - std::floor(x);
  return std::min(q, 1.0 - q);
}

// Random cylinder with plateau gauge profile; endpoint values stay at least
// margin (in lattice units) away from the spectral lattice.
inline anomaly::SpacetimeModel random_cylinder(Rng& rng, double margin = 1e-3) {
  const double circumference = rng.uniform(1.0, 10.0);
  const double scale = 6.28318530717958647692 / circumference;
  const anomaly::CircleSpin spin =
      rng.coin() ? anomaly::CircleSpin::trivial : anomaly::CircleSpin::nontrivial;
  const double sigma = spin == anomaly::CircleSpin::trivial ? 0.0 : 0.5;
  const auto draw_value = [&] {
    for (;;) {
      const double v = rng.uniform(-5.0, 5.0);
      if (frac_distance_to_integers(sigma + v / scale) > margin) return v;
    }
  };
  const anomaly::TimeWindow window(0.0, 1.0);
  return anomaly::SpacetimeModel(anomaly::Cylinder{
      circumference, spin,
      anomaly::Profile::plateau(draw_value(), draw_value(), window, rng.uniform(0.1, 0.3)),
      window});
}

// Brute-force projector-difference count with a fixed large cutoff; test-only
// oracle, independent of the stabilization logic in flow.
inline long long brute_force_trace(double scale, double sigma, double gauge1, double gauge2,
                                   long long cutoff = 100000) {
  long long sum = 0;
  for (long long k = -cutoff; k <= cutoff; ++k) {
    const double l1 = scale * (static_cast<double>(k) + sigma) + gauge1;
    const double l2 = scale * (static_cast<double>(k) + sigma) + gauge2;
    sum += (l1 >= 0.0 ? 1 : 0) - (l2 >= 0.0 ? 1 : 0);
  }
  return sum;
}

} // namespace testsupport
