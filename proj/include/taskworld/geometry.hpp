#pragma once

#include <algorithm>
#include <array>
#include <cmath>

namespace taskworld {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  bool operator==(const Vec3& o) const = default;
};

inline double horizontal_distance(const Vec3& a, const Vec3& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

// Axis-aligned box, min/max corners in world frame.
struct Aabb {
  Vec3 lo;
  Vec3 hi;

  bool valid() const { return lo.x <= hi.x && lo.y <= hi.y && lo.z <= hi.z; }
  Vec3 center() const { return {(lo.x + hi.x) / 2, (lo.y + hi.y) / 2, (lo.z + hi.z) / 2}; }
  Vec3 extents() const { return hi - lo; }

  bool contains(const Vec3& p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y && p.z >= lo.z && p.z <= hi.z;
  }

  bool contains_xy(double x, double y) const {
    return x >= lo.x && x <= hi.x && y >= lo.y && y <= hi.y;
  }

  bool contains_box(const Aabb& b) const { return contains(b.lo) && contains(b.hi); }

  bool intersects(const Aabb& b) const {
    return lo.x <= b.hi.x && hi.x >= b.lo.x && lo.y <= b.hi.y && hi.y >= b.lo.y &&
           lo.z <= b.hi.z && hi.z >= b.lo.z;
  }

  Aabb shrunk(double margin) const {
    return {{lo.x + margin, lo.y + margin, lo.z + margin},
            {hi.x - margin, hi.y - margin, hi.z - margin}};
  }

  static Aabb from_center_extents(const Vec3& center, const Vec3& ext) {
    Vec3 h = ext * 0.5;
    return {center - h, center + h};
  }
};

// World-frame AABB of a yawed box: the rotated footprint's bounding
// rectangle, height unchanged.
inline Aabb yawed_box_aabb(const Vec3& center, const Vec3& extents, double yaw) {
  const double c = std::abs(std::cos(yaw));
  const double s = std::abs(std::sin(yaw));
  const double hx = extents.x / 2, hy = extents.y / 2;
  Vec3 half{c * hx + s * hy, s * hx + c * hy, extents.z / 2};
  return {center - half, center + half};
}

struct Rect2 {
  double width = 0.0;
  double height = 0.0;
};

inline double deg_to_rad(double deg) { return deg * M_PI / 180.0; }

// Heading unit vectors in the robot base frame (heading 0 = +x).
inline Vec3 heading_forward(double heading) { return {std::cos(heading), std::sin(heading), 0.0}; }
inline Vec3 heading_left(double heading) {
  return {-std::sin(heading), std::cos(heading), 0.0};
}

}  // namespace taskworld
