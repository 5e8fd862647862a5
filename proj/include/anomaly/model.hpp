#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "anomaly/profile.hpp"

namespace anomaly {

enum class CircleSpin { trivial, nontrivial };

// Flat 2D cylinder R x S^1 with an electric gauge profile A1(t).
struct Cylinder {
  double circumference; // L > 0
  CircleSpin spin;
  Profile gauge; // A1
  TimeWindow window;
};

// R x T^3 with scale profiles a1, a2, a3; 8 spin structures (index 0..7,
// index 0 is the structure with a one-dimensional Dirac kernel).
struct BianchiI {
  Profile a1, a2, a3;
  int spin; // 0..7
  TimeWindow window;
};

// R x (Heisenberg nilmanifold) with the left-invariant metric family
// parametrized by a(t), b(t) > 0; 4 spin structures (index 0..3).  The
// integer eta offsets at the window ends are external inputs.
struct BianchiII {
  Profile a, b;
  int spin; // 0..3
  TimeWindow window;
  std::optional<long long> n1;
  std::optional<long long> n2;
};

// Registered reference value on R x S^(4k-1); no numerics attached.
struct SphereReference {
  int k; // >= 1
};

class SpacetimeModel {
public:
  using Variant = std::variant<Cylinder, BianchiI, BianchiII, SphereReference>;

  explicit SpacetimeModel(Cylinder m);
  explicit SpacetimeModel(BianchiI m);
  explicit SpacetimeModel(BianchiII m);
  explicit SpacetimeModel(SphereReference m);

  const Variant& variant() const { return v_; }

  template <class T> const T* get_if() const { return std::get_if<T>(&v_); }
  template <class T> bool is() const { return std::holds_alternative<T>(v_); }

  // Spacetime dimension: 2 for the cylinder, 4 for the Bianchi models.
  int dimension() const;
  std::string kind() const;
  std::string descriptor() const;

  // Window of the region between the two hypersurfaces (absent for the
  // sphere reference entry).
  std::optional<TimeWindow> window() const;

private:
  Variant v_;
};

struct ValidationEntry {
  std::string profile_name;
  double max_abs_derivative; // over both end segments
};

struct ValidationReport {
  std::vector<ValidationEntry> entries;
  double tolerance;
  bool pass;
};

Profile plateau_profile(double v_start, double v_end, const TimeWindow& window,
                        double ramp_fraction);

// Checks that every profile of the model is constant near both window ends.
// Segments are the profile's own declared plateau when known, otherwise the
// leading/trailing 5% of the window.  A failing report is a normal return.
ValidationReport validate_product_structure(const SpacetimeModel& model, double tol);

} // namespace anomaly
