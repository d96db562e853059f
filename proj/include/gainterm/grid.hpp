#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "gainterm/analytic.hpp"
#include "gainterm/vec3.hpp"

namespace gainterm::grid {

/// Uniform cubic velocity grid: n nodes per axis (even, n >= 8) on
/// [-L, L)^3 with spacing h = 2L/n, nodes v_i = -L + i h.
/// The dual grid carries xi_j = (pi/L) j, j in {-n/2 .. n/2-1}.
struct VelocityGrid {
  int n{0};
  double half_width{0.0};

  static VelocityGrid make(int n, double half_width);

  double h() const { return 2.0 * half_width / n; }
  std::size_t size() const {
    return static_cast<std::size_t>(n) * n * n;
  }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n + j) * n + k;
  }
  double coord(int i) const { return -half_width + i * h(); }
  Vec3 node(int i, int j, int k) const { return {coord(i), coord(j), coord(k)}; }

  double dual_step() const { return M_PI / half_width; }
  /// Signed frequency for storage index m (wrap-around order).
  double dual_coord(int m) const {
    int j = (m < n / 2) ? m : m - n;
    return j * dual_step();
  }
  Vec3 dual_node(int mi, int mj, int mk) const {
    return {dual_coord(mi), dual_coord(mj), dual_coord(mk)};
  }

  bool operator==(const VelocityGrid&) const = default;
};

/// Complex samples on a velocity grid (row-major by (i,j,k)).
struct GridFunction {
  VelocityGrid grid;
  std::vector<std::complex<double>> values;

  static GridFunction zeros(const VelocityGrid& g) {
    return {g, std::vector<std::complex<double>>(g.size())};
  }
  std::complex<double>& at(int i, int j, int k) { return values[grid.index(i, j, k)]; }
  const std::complex<double>& at(int i, int j, int k) const {
    return values[grid.index(i, j, k)];
  }
};

enum class Direction { Forward, Inverse };

/// Scaled DFT with the convention fhat(xi) = int e^{-i x.xi} f(x) dx:
/// forward multiplies the lattice transform by h^3, inverse applies the
/// (2pi)^-3 (dxi)^3 density so that inverse(forward(f)) == f to rounding and
/// the discrete Parseval identity sum |f|^2 h^3 = (2pi)^-3 sum |fhat|^2 (dxi)^3
/// holds exactly.
GridFunction dft(const GridFunction& gf, Direction dir);

/// Fractional derivative D^s: multiplies fhat by |xi|^s on the dual grid.
/// The zero mode maps to 0 for s != 0 (for s < 0 the input must be mean-zero:
/// |fhat(0)| <= 1e-10 * ||f||_{L^1}).
GridFunction apply_dpow(const GridFunction& gf, double s);

struct NormSpec {
  enum class Kind { Lebesgue, SobolevHom, SobolevInhom };
  Kind kind{Kind::Lebesgue};
  double p{2.0};        // Lebesgue exponent (infinity allowed)
  double weight_q{0.0};  // <v>^q weight
  double alpha{0.0};     // Sobolev order

  static NormSpec lebesgue(double p, double q = 0.0);
  static NormSpec sobolev_hom(double alpha);
  static NormSpec sobolev_inhom(double alpha);
};

/// Weighted Lebesgue norms are plain lattice sums; Sobolev norms go through
/// the DFT with dual measure (dxi)^3 (2pi)^-3, so ||.||_{Hdot^0} == ||.||_{L^2}.
double norm(const GridFunction& gf, const NormSpec& spec);

enum class GuardPolicy { Ignore, Warn, Throw };

struct SampleResult {
  GridFunction gf;
  double boundary_max{0.0};  // max |f| on the shell outside [-L+1, L-1]^3
  bool guard_violated{false};
};

/// Pointwise sampling with the truncation guard checked on the boundary
/// shell. Default threshold admits the unit gaussian at L = 8.
SampleResult sample_on_grid(const AnalyticFn& fn, const VelocityGrid& g,
                            double guard_threshold = 1e-10,
                            GuardPolicy policy = GuardPolicy::Throw);

/// "GFv1" text format: header "GFv1 n L", then n^3 lines "re im" in
/// row-major (i,j,k) order. Readers reject mismatched counts.
void write_gridfunction(std::ostream& os, const GridFunction& gf);
GridFunction read_gridfunction(std::istream& is);
void write_gridfunction_file(const std::string& path, const GridFunction& gf);
GridFunction read_gridfunction_file(const std::string& path);

}  // namespace gainterm::grid
