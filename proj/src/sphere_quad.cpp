#include "gainterm/sphere_quad.hpp"

#include <cmath>
#include <stdexcept>

namespace gainterm::quadrature {

GaussLegendre gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1 required");
  GaussLegendre out;
  out.nodes.resize(n);
  out.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Newton from the Chebyshev-like initial guess
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    out.nodes[i] = x;
    out.nodes[n - 1 - i] = -x;
    out.weights[i] = w;
    out.weights[n - 1 - i] = w;
  }
  // map [-1,1] -> [a,b]
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    out.nodes[i] = mid - half * out.nodes[i];
    out.weights[i] *= half;
  }
  return out;
}

double SphereQuadrature::wphi() const { return 2.0 * M_PI / nphi; }

double SphereQuadrature::weight_sum() const {
  double s = 0.0;
  for (double w : wmu) s += w;
  return s * 2.0 * M_PI;
}

SphereQuadrature SphereQuadrature::make(int nmu, int nphi) {
  if (nmu < 1 || nphi < 1)
    throw std::invalid_argument("SphereQuadrature: node counts must be positive");
  GaussLegendre gl = gauss_legendre(nmu, 0.0, 1.0);
  SphereQuadrature q;
  q.mu = std::move(gl.nodes);
  q.wmu = std::move(gl.weights);
  q.nphi = nphi;
  return q;
}

}  // namespace gainterm::quadrature
