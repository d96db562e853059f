#include "gainterm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gainterm::geometry {

std::pair<Vec3, Vec3> pre_collision(const Vec3& v, const Vec3& v_star,
                                    const Vec3& omega) {
  if (std::fabs(norm(omega) - 1.0) > 1e-10)
    throw std::invalid_argument("pre_collision: omega must be a unit vector");
  const Vec3 z = v - v_star;
  const double t = dot(omega, z);
  return {v - omega * t, v_star + omega * t};
}

std::pair<double, double> frame_angles(const Vec3& x, const Vec3& xi) {
  if (norm2(x) == 0.0 || norm2(xi) == 0.0)
    throw std::domain_error("frame_angles: zero input");
  const Frame f = axis_frame(normalized(x));
  const Spherical s = to_spherical(xi, f);
  return {s.theta, s.phi};
}

double phase_sigma(const Vec3& x, const Vec3& xi, const SpherePoint& omega) {
  auto [theta0, phi0] = frame_angles(x, xi);
  const double ct = std::cos(omega.theta), st = std::sin(omega.theta);
  return ct * (std::cos(omega.phi - phi0) * std::sin(theta0) * st +
               std::cos(theta0) * ct);
}

SphereCalculus sphere_calculus(const Vec3& x, const Vec3& xi,
                               const SpherePoint& omega) {
  auto [theta0, phi0] = frame_angles(x, xi);
  const double st = std::sin(omega.theta);
  if (std::fabs(st) < 1e-9)
    throw std::domain_error("sphere_calculus: pole (sin theta = 0), frame basis undefined");
  const double A = std::sin(theta0), B = std::cos(theta0);
  const double ct = std::cos(omega.theta);
  const double c2 = std::cos(2.0 * omega.theta), s2 = std::sin(2.0 * omega.theta);
  const double u = std::cos(omega.phi - phi0), w = std::sin(omega.phi - phi0);

  SphereCalculus out;
  out.grad = {A * u * c2 - B * s2, -A * w * ct};
  out.hess.m[0][0] = -2.0 * A * u * s2 - 2.0 * B * c2;
  out.hess.m[0][1] = out.hess.m[1][0] = A * w * st;
  out.hess.m[1][1] = -2.0 * A * u * ct * st - 2.0 * B * ct * ct;
  return out;
}

CriticalPair critical_points(const Vec3& x, const Vec3& xi) {
  const double nx = norm(x), nxi = norm(xi);
  if (nx == 0.0 || nxi == 0.0)
    throw std::domain_error("critical_points: zero input");
  const Vec3 xh = x / nx, xih = xi / nxi;
  const double c0 = std::clamp(dot(xh, xih), -1.0, 1.0);
  const double theta0 = std::acos(c0);

  CriticalPair cp;
  cp.sigma_plus = 0.5 * (c0 + 1.0);
  cp.sigma_minus = 0.5 * (c0 - 1.0);
  cp.degenerate = (theta0 < kColinearTol) || (M_PI - theta0 < kColinearTol);
  if (cp.degenerate) {
    // the whole great-circle family degenerates; report the axis
    cp.omega_plus = cp.omega_minus = xh;
    return cp;
  }
  cp.omega_plus = normalized(xh + xih);
  cp.omega_minus = normalized(xh - xih);
  cp.hess_plus = Mat2::diag(-2.0, -2.0 * cp.sigma_plus);
  cp.hess_minus = Mat2::diag(2.0, -2.0 * cp.sigma_minus);
  return cp;
}

}  // namespace gainterm::geometry
