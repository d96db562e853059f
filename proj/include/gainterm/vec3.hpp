#pragma once

#include <cmath>
#include <stdexcept>

namespace gainterm {

/// 3-vector in velocity or frequency units.
struct Vec3 {
  double x{0.0}, y{0.0}, z{0.0};

  constexpr Vec3() = default;
  constexpr Vec3(double X, double Y, double Z) : x(X), y(Y), z(Z) {}

  constexpr Vec3 operator+(const Vec3& r) const { return {x + r.x, y + r.y, z + r.z}; }
  constexpr Vec3 operator-(const Vec3& r) const { return {x - r.x, y - r.y, z - r.z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3& operator+=(const Vec3& r) { x += r.x; y += r.y; z += r.z; return *this; }
  constexpr Vec3& operator-=(const Vec3& r) { x -= r.x; y -= r.y; z -= r.z; return *this; }

  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  friend constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }
  friend constexpr double dot(const Vec3& a, const Vec3& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
  }
  friend constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
  }
  friend double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
  friend constexpr double norm2(const Vec3& v) { return dot(v, v); }

  bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
  }
};

inline Vec3 normalized(const Vec3& v) {
  double n = norm(v);
  if (n == 0.0) throw std::domain_error("normalized: zero vector");
  return v / n;
}

/// Japanese bracket <v> = (1+|v|^2)^{1/2}.
inline double jbracket(const Vec3& v) { return std::sqrt(1.0 + norm2(v)); }

/// Point on the unit sphere, polar angle theta in [0,pi], azimuth phi in [0,2pi).
struct SpherePoint {
  double theta{0.0};
  double phi{0.0};

  Vec3 unit() const {
    double st = std::sin(theta);
    return {std::cos(phi) * st, std::sin(phi) * st, std::cos(theta)};
  }
};

/// Right-handed orthonormal frame with e3 the given axis.
struct Frame {
  Vec3 e1, e2, e3;
};

/// Deterministic frame for a unit axis: e1 is the projection of the
/// smallest-index coordinate axis not parallel to the axis.
inline Frame axis_frame(const Vec3& axis_unit) {
  const Vec3 u = axis_unit;
  // the x-axis unless u is (anti)parallel to it; u cannot be parallel to both
  Vec3 e = (std::fabs(u.x) > 1.0 - 1e-12) ? Vec3{0, 1, 0} : Vec3{1, 0, 0};
  Vec3 e1 = e - u * dot(e, u);
  e1 = e1 / norm(e1);
  Vec3 e2 = cross(u, e1);
  return {e1, e2, u};
}

/// Spherical coordinates of v in the frame: (r, theta, phi) with
/// theta measured from frame.e3 and phi from frame.e1.
struct Spherical {
  double r, theta, phi;
};

inline Spherical to_spherical(const Vec3& v, const Frame& f) {
  double r = norm(v);
  if (r == 0.0) throw std::domain_error("to_spherical: zero vector");
  double c = dot(v, f.e3) / r;
  c = std::clamp(c, -1.0, 1.0);
  double th = std::acos(c);
  double p = std::atan2(dot(v, f.e2), dot(v, f.e1));
  if (p < 0) p += 2.0 * M_PI;
  return {r, th, p};
}

}  // namespace gainterm
