#pragma once

#include <vector>

namespace gainterm::quadrature {

/// Gauss-Legendre nodes/weights on [a,b].
struct GaussLegendre {
  std::vector<double> nodes, weights;
};

GaussLegendre gauss_legendre(int n, double a, double b);

/// Product rule on the upper hemisphere (theta in [0,pi/2]):
/// Gauss-Legendre in mu = cos(theta) on [0,1] (the measure sin d theta d phi
/// becomes d mu d phi) times the uniform trapezoid in phi. Weights sum to the
/// hemisphere area 2*pi.
struct SphereQuadrature {
  std::vector<double> mu, wmu;  // GL on [0,1]
  int nphi{0};

  double wphi() const;
  double weight_sum() const;

  static SphereQuadrature make(int nmu, int nphi);
};

}  // namespace gainterm::quadrature
