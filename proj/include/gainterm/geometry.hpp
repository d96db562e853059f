#pragma once

#include <array>
#include <utility>

#include "gainterm/vec3.hpp"

namespace gainterm::geometry {

/// 2x2 real matrix in the tangent basis {e_theta, e_phi}.
struct Mat2 {
  double m[2][2]{{0, 0}, {0, 0}};
  static Mat2 diag(double a, double b) {
    Mat2 r;
    r.m[0][0] = a;
    r.m[1][1] = b;
    return r;
  }
};

/// Critical-point data of the bilinear spherical phase for a pair (x, xi).
///
/// omega_plus bisects the angle between x and xi, omega_minus the
/// complementary one; both are taken on the hemisphere x.omega >= 0.
/// sigma_pm = (cos(theta0) +- 1)/2 are the phase values there. The covariant
/// Hessians are diag(-2, -2*sigma_plus) at omega_plus and
/// diag(+2, -2*sigma_minus) at omega_minus (the minus point is a minimum of
/// the phase on the sphere; its signature is +2, matching |det| = 4|sigma|).
struct CriticalPair {
  Vec3 omega_plus, omega_minus;
  double sigma_plus{0.0}, sigma_minus{0.0};
  Mat2 hess_plus, hess_minus;
  bool degenerate{false};
};

/// Colinearity tolerance (radians) below which the critical family
/// degenerates to the axis and Hessians are not meaningful.
inline constexpr double kColinearTol = 1e-8;

/// Pre-collision pair (v', v'_*) for deflection omega (unit within 1e-10).
/// The map is an involution and conserves momentum and kinetic energy.
std::pair<Vec3, Vec3> pre_collision(const Vec3& v, const Vec3& v_star,
                                    const Vec3& omega);

/// Angles (theta0, phi0) of xi in the deterministic frame whose polar axis
/// is x/|x| (see axis_frame).
std::pair<double, double> frame_angles(const Vec3& x, const Vec3& xi);

/// Normalized phase sigma(x, xi; omega) with omega given in the x-frame,
/// satisfying |x||xi| * sigma = (x.omega)(xi.omega).
double phase_sigma(const Vec3& x, const Vec3& xi, const SpherePoint& omega);

struct SphereCalculus {
  std::array<double, 2> grad;  // (d/dtheta, (1/sin theta) d/dphi)
  Mat2 hess;                   // covariant Hessian in {e_theta, e_phi}
};

/// Covariant gradient and Hessian of sigma(x, xi; .) at omega.
/// Throws at the coordinate poles (sin theta ~ 0).
SphereCalculus sphere_calculus(const Vec3& x, const Vec3& xi,
                               const SpherePoint& omega);

/// Hemisphere-canonical critical points of the phase:
/// omega_plus ~ normalized(x/|x| + xi/|xi|), omega_minus ~ normalized(x/|x| - xi/|xi|).
CriticalPair critical_points(const Vec3& x, const Vec3& xi);

}  // namespace gainterm::geometry
