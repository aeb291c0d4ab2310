#pragma once

#include <array>
#include <cmath>
#include <string_view>

namespace rirsim {

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double& operator[](int axis) { return axis == 0 ? x : (axis == 1 ? y : z); }
  double operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }

  friend bool operator==(const Point3&, const Point3&) = default;
};

inline Point3 operator-(const Point3& a, const Point3& b) {
  return {a.x - b.x, a.y - b.y, a.z - b.z};
}

inline double dot(const Point3& a, const Point3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline double norm(const Point3& p) { return std::sqrt(dot(p, p)); }

inline bool is_finite(const Point3& p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

// Wall order used everywhere: x0, x1, y0, y1, z0, z1. The "0" wall of an
// axis is the one through the origin, the "1" wall the far one.
enum Wall { kX0 = 0, kX1, kY0, kY1, kZ0, kZ1 };

struct RoomSpec {
  Point3 size;                      // L_x, L_y, L_z in meters
  std::array<double, 6> beta{};     // signed pressure reflection coefficients

  double volume() const { return size.x * size.y * size.z; }
  // Wall areas in Wall order.
  std::array<double, 6> wall_areas() const;
  double total_surface() const;
  bool contains(const Point3& p) const;

  // Throws InvalidArgument when a size is non-positive or |beta| > 1.
  void validate() const;

  friend bool operator==(const RoomSpec&, const RoomSpec&) = default;
};

enum class PolarPattern { kOmni, kSubcardioid, kCardioid, kHypercardioid, kBidirectional };

std::string_view to_string(PolarPattern pattern);
// Throws InvalidArgument for unknown names.
PolarPattern parse_polar_pattern(std::string_view name);

// Constant term a of the first-order pattern a + (1 - a) cos(theta).
double pattern_constant(PolarPattern pattern);

struct Receiver {
  Point3 pos;
  PolarPattern pattern = PolarPattern::kOmni;
  Point3 orientation{1.0, 0.0, 0.0};

  void validate() const;

  friend bool operator==(const Receiver&, const Receiver&) = default;
};

inline constexpr double kUnitNormTolerance = 1e-9;

}  // namespace rirsim
