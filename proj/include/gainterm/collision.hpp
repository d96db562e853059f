#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "gainterm/analytic.hpp"
#include "gainterm/grid.hpp"
#include "gainterm/partitions.hpp"
#include "gainterm/sphere_quad.hpp"
#include "gainterm/vec3.hpp"

namespace gainterm::collision {

using cplx = std::complex<double>;

/// Which part of the kinetic factor |z|^gamma to keep: the full kernel, the
/// small-relative-velocity part s(|z|)|z|^gamma, or the complement.
enum class Cutoff { Full, Small, Large };

/// Collision kernel B(z, w) = |z|^gamma cos(theta), gamma in [0,1],
/// theta in [0, pi/2] measured from z/|z|; optional smooth velocity cutoff.
struct KernelSpec {
  double gamma{1.0};
  Cutoff cutoff{Cutoff::Full};

  static KernelSpec make(double gamma, Cutoff cutoff = Cutoff::Full);
};

/// Discretization used by the velocity integrals: hemisphere rule (default
/// 16x16, the integrand is smooth here) and the midpoint lattice for v_*.
/// tail_cutoff > 0 enables the analytic pair-skip: a (v, v_*) pair is dropped
/// when the conserved energy |v|^2 + |v_*|^2 provably caps
/// |f(v')g(v'_*)| max(1,|z|) below tail_cutoff times its global maximum.
/// The predicate is independent of gamma and of the cutoff variant.
struct QuadConfig {
  quadrature::SphereQuadrature sphere;
  grid::VelocityGrid vstar_grid;
  double tail_cutoff{0.0};
  int threads{0};

  static QuadConfig make_default(const grid::VelocityGrid& vstar,
                                 int nmu = 16, int nphi = 16,
                                 double tail_cutoff = 0.0);
};

/// Gain term and both cutoff halves for one gamma (small + large == full).
struct QplusTriple {
  grid::GridFunction full, small, large;
};

/// Multi-gamma single-pass grid evaluation: the angular inner sum is
/// independent of gamma and of the cutoff, so all outputs share one sweep
/// over (v, v_*, omega). Output grid == quad.vstar_grid is the common case
/// but not required.
std::vector<QplusTriple> qplus_grid_multi(const AnalyticFn& f, const AnalyticFn& g,
                                          const grid::VelocityGrid& out,
                                          std::span<const double> gammas,
                                          const QuadConfig& quad,
                                          const partitions::BumpChain& bc);

/// Spec operation: Q+(f,g) sampled on a grid for one kernel.
grid::GridFunction qplus_eval(const AnalyticFn& f, const AnalyticFn& g,
                              const grid::VelocityGrid& out, const KernelSpec& kernel,
                              const QuadConfig& quad, const partitions::BumpChain& bc);

/// Q+(f,g) at scattered points (no pair-skip).
std::vector<cplx> qplus_points(const AnalyticFn& f, const AnalyticFn& g,
                               std::span<const Vec3> points, const KernelSpec& kernel,
                               const QuadConfig& quad, const partitions::BumpChain& bc);

/// Loss-side convolution: pi * sum_{v_*} g(v_*) w(|v - v_*|) h^3 with
/// w = cutoff-adjusted |.|^gamma.
cplx loss_eval(const AnalyticFn& g, const Vec3& v, const KernelSpec& kernel,
               const QuadConfig& quad, const partitions::BumpChain& bc);

enum class RadonVariant { T, TSmall };

/// Radon-type angular average |x|^gamma int cos(theta) h(x - (x.w)w) dW
/// with the hemisphere axis x/|x|; TSmall multiplies by s(|x|).
cplx radon_eval(const AnalyticFn& h, const Vec3& x, double gamma,
                RadonVariant variant, const quadrature::SphereQuadrature& sphere,
                const partitions::BumpChain& bc);

/// Translation-conjugated transform
/// |v-v_*|^gamma int cos(theta) h(v - ((v-v_*).w) w) dW, axis (v-v_*)/|v-v_*|.
/// At v == v_*: 0 for gamma > 0; for gamma = 0 the angular integral is
/// axis-independent and evaluates to pi h(v). degenerate_pair reports that case.
cplx conjugated_radon(const AnalyticFn& h, const Vec3& v, const Vec3& v_star,
                      double gamma, RadonVariant variant,
                      const quadrature::SphereQuadrature& sphere,
                      const partitions::BumpChain& bc,
                      bool* degenerate_pair = nullptr);

/// <v>^-gamma <v_*>^-gamma int B_sbar(v-v_*, w) h(v') dW.
cplx h_sbar_eval(const AnalyticFn& h, const Vec3& v, const Vec3& v_star,
                 double gamma, const quadrature::SphereQuadrature& sphere,
                 const partitions::BumpChain& bc);

/// Triple integral <Q+(f,g), h> evaluated in the (v, v_*, omega) order, one
/// value per requested gamma.
std::vector<cplx> weak_form_rhs_multi(const AnalyticFn& f, const AnalyticFn& g,
                                      const AnalyticFn& h,
                                      std::span<const double> gammas, Cutoff cutoff,
                                      const QuadConfig& quad,
                                      const partitions::BumpChain& bc);

cplx weak_form_rhs(const AnalyticFn& f, const AnalyticFn& g, const AnalyticFn& h,
                   const KernelSpec& kernel, const QuadConfig& quad,
                   const partitions::BumpChain& bc);

struct OracleResult {
  cplx value{};
  bool converged{false};
  double observed_order{0.0};
  std::vector<cplx> levels;
};

struct OracleOptions {
  double box_half_width{8.5};
  double coarse_spacing{1.0};
  int theta_nodes{33};  // Simpson rule, odd
  int phi_nodes{20};
  std::uint64_t seed{1234567};
};

/// Independent re-evaluation of Q+(f,g)(v): Simpson-in-theta angular rule and
/// a v_*-lattice anchored at v with a seeded fractional offset, refined
/// through three spacings and Richardson-extrapolated with the observed order.
OracleResult qplus_oracle(const AnalyticFn& f, const AnalyticFn& g, const Vec3& v,
                          const KernelSpec& kernel, const partitions::BumpChain& bc,
                          const OracleOptions& opt = {});

}  // namespace gainterm::collision
