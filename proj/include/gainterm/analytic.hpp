#pragma once

#include <complex>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "gainterm/vec3.hpp"

namespace gainterm {

/// One term of a Gaussian mixture:
///   amp * exp(-|v - center|^2 / (2 width^2)) * exp(i wavevec . v)
struct GaussComponent {
  std::complex<double> amp{1.0, 0.0};
  Vec3 center{};
  double width{1.0};
  Vec3 wavevec{};
};

/// Closed-form test function on R^3, evaluated exactly pointwise.
/// Built from gaussians, smooth bumps, constants and the wrappers
/// modulate / dilate / translate / sum. Dilation and translation compose
/// associatively by construction (they rewrite the closed form).
class AnalyticFn {
 public:
  virtual ~AnalyticFn() = default;
  virtual std::complex<double> eval(const Vec3& v) const = 0;

  /// Express the function as a finite Gaussian mixture if possible
  /// (anything without bump/constant nodes). Appends to `out`.
  virtual bool flatten(std::vector<GaussComponent>& out) const = 0;

  /// Canonical textual form in the CLI grammar (round-trips through parse).
  virtual std::string str() const = 0;
};

using AnalyticFnPtr = std::shared_ptr<const AnalyticFn>;

AnalyticFnPtr make_gaussian(const Vec3& center, double width, double amplitude);
AnalyticFnPtr make_bump(const Vec3& center, double radius);
AnalyticFnPtr make_constant(double value);
AnalyticFnPtr make_modulated(AnalyticFnPtr inner, const Vec3& wavevec);
AnalyticFnPtr make_dilated(AnalyticFnPtr inner, double lambda);
AnalyticFnPtr make_translated(AnalyticFnPtr inner, const Vec3& shift);
AnalyticFnPtr make_sum(std::vector<AnalyticFnPtr> terms);
AnalyticFnPtr make_zero();

/// Parse the compact grammar, e.g.
///   gaussian(c=0,0,0;w=1;a=1)+bump(c=1,0,0;r=2)
///   dilate(2; gaussian())            translate(0.5,0,0; gaussian(w=0.8))
///   modulate(3,0,0; gaussian())      constant(a=1)
AnalyticFnPtr parse_analytic(std::string_view text);

/// Radial decay envelope for a Gaussian mixture:
/// env(r) = sum_k |amp_k| exp(-(max(r - |c_k|, 0))^2 / (2 w_k^2)).
double mixture_envelope(const std::vector<GaussComponent>& comps, double r);

}  // namespace gainterm
