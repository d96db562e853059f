#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "gainterm/partitions.hpp"
#include "gainterm/sphere_quad.hpp"
#include "gainterm/vec3.hpp"

namespace gainterm::symbol {

/// One evaluation of the oscillatory symbol
///   a(x, xi) = (|x||xi|)^gamma int_{S^2_+} e^{-i (x.w)(xi.w)} cos(theta) dW(w),
/// hemisphere and theta relative to the axis x/|x|.
struct SymbolEval {
  enum class Method { Quadrature, Stationary };
  std::complex<double> value{};
  Method method{Method::Quadrature};
  double lambda{0.0};  // |x||xi|
  double theta0{0.0};  // angle between x and xi
  std::optional<double> est_error;  // diagnostic scale only, never a bound
};

/// Nodes per axis needed for the oscillation budget O(lambda) of the phase.
int node_floor(double lambda, double mult = 0.75);

/// Product quadrature (GL in mu x trapezoid in phi). Refuses with the
/// required node count when the rule is below the floor for this lambda.
SymbolEval symbol_direct(const Vec3& x, const Vec3& xi, double gamma,
                         const quadrature::SphereQuadrature& quad,
                         double mult = 0.75);

/// Builds the rule at the floor and evaluates.
SymbolEval symbol_direct_auto(const Vec3& x, const Vec3& xi, double gamma,
                              double mult = 0.75);

/// Two-critical-point leading order
///   i pi Lambda^{gamma-1} (e^{-i Lambda sigma_+} - e^{-i Lambda sigma_-}),
/// which for b = cos collapses to the closed form
///   2 pi Lambda^{gamma-1} e^{-i Lambda cos(theta0)/2} sin(Lambda/2).
/// Refused for colinear pairs and when
/// Lambda cos^2(theta0/2) sin^2(theta0/2) < lambda_min.
SymbolEval symbol_stationary(const Vec3& x, const Vec3& xi, double gamma,
                             double lambda_min = 10.0);

struct SymbolComparison {
  SymbolEval quad, stat;
  double rel_err{0.0};  // |quad-stat| / max(|quad|, Lambda^{gamma-1})
};

SymbolComparison symbol_compare(const Vec3& x, const Vec3& xi, double gamma,
                                double mult = 0.75, double lambda_min = 10.0);

struct Region3Row {
  double lambda{0.0}, theta0{0.0};
  std::complex<double> value{};
  double abs_norm{0.0};  // |a| * Lambda^{1/2}
  int cone{0};
};

/// Deterministic sampler of coarse-A zone-III phase-space points
/// (cones |z| in 1..3), evaluated by quadrature for each requested gamma.
/// The angular integral is gamma-independent, so all gammas share one
/// quadrature pass per sample.
std::vector<std::vector<Region3Row>> region3_scan_multi(
    std::uint64_t seed, int n, const std::vector<double>& gammas,
    const partitions::BumpChain& bc, double mult = 0.75);

std::vector<Region3Row> region3_scan(std::uint64_t seed, int n, double gamma,
                                     const partitions::BumpChain& bc,
                                     double mult = 0.75);

/// Least-squares slope of log(abs_norm) against log(lambda).
double scan_slope(const std::vector<Region3Row>& rows);

/// CSV columns: lambda, theta0, re_a, im_a, abs_norm, method.
void write_scan_csv(std::ostream& os, const std::vector<Region3Row>& rows);

}  // namespace gainterm::symbol
