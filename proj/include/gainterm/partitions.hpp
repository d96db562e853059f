#pragma once

#include <optional>

#include "gainterm/vec3.hpp"

namespace gainterm::partitions {

/// Smooth-step construction used for every cutoff in the library.
/// Exp is the classical C-infinity ramp built from e^{-1/t}; Quintic is the
/// C^2 polynomial step, exposed so results can be checked for insensitivity
/// to the ramp choice.
enum class Ramp { Exp, Quintic };

/// Dyadic radial/angular partition machinery.
///
/// psi(r) = 1 for r <= 8, 0 for r >= 16, smooth in between;
/// rho(r) = psi(r) - psi(2r) is supported in (4,16), the family rho(2^-k r)
/// telescopes to 1 for r > 0 and neighbours further than one octave apart
/// have disjoint supports. s_cut = sum_{k<=0} rho(2^-k r) collapses to psi,
/// and s_bar = 1 - s_cut.
///
/// The angular family reuses the same ramp scaled to (pi/8, pi/2):
/// zeta(t) = psi_ang(t) - psi_ang(2t), zeta_n = zeta(2^n t) for n >= 1,
/// zeta_0 the symmetric remainder, zeta_{-n}(t) = zeta_n(pi - t).
class BumpChain {
 public:
  explicit BumpChain(Ramp ramp = Ramp::Exp) : ramp_(ramp) {}

  Ramp ramp() const { return ramp_; }

  double psi(double r) const;    // radial step, knots 8 and 16
  double rho(double r) const;    // psi(r) - psi(2r)
  double rho_k(int k, double r) const;  // rho(2^-k r)
  double s_cut(double r) const;  // small-velocity cutoff, =1 on [0,8], =0 on [16,inf)
  double s_bar(double r) const;  // 1 - s_cut

  double psi_ang(double t) const;  // angular step, knots pi/4 and pi/2
  double zeta(double t) const;     // supported in (pi/8, pi/2)
  double zeta_z(int z, double t) const;

 private:
  double step01(double t) const;  // 0 at t<=0, 1 at t>=1
  Ramp ramp_;
};

enum class RadialKind { Rho, ChiK, SCut, SBar };

/// rho(2^-k r), chi_k(|.|)=rho(2^-k r), s or s-bar at radius r >= 0.
double radial_partition(const BumpChain& bc, RadialKind kind, int k, double r);

/// zeta_z evaluated at the angle spanned by x and xi. Throws on zero input.
double angular_partition(const BumpChain& bc, int z, const Vec3& x, const Vec3& xi);

enum class Coarse { A, B1, B2, C1, C2 };
enum class Zone { I, II, III, None };

struct RegionLabel {
  Coarse coarse{Coarse::A};
  std::optional<int> cone;  // argmax_z zeta_z; empty for (anti)colinear pairs
  Zone zone{Zone::None};    // set only for coarse A
};

const char* to_string(Coarse c);
const char* to_string(Zone z);

/// Diagnostic phase-space classifier.
///
/// Coarse label from the support inequalities, first match in the order
/// A, B1, B2, C1, C2:
///   A : |x|>8, |xi|>8
///   B1: |x||xi|>64, |x|>8,  |xi|<16
///   B2: |x||xi|>64, |x|<16
///   C1: |x||xi|<512, |x|>8
///   C2: |x||xi|<512, |x|<16
/// For label A the zone is resolved per dominant cone z, first match
///   I  : |x| > 8*2^|z| and |xi| > 8*2^|z|   (always I when z = 0)
///   II : |x||xi| > 64*4^|z| and min radius inside (8, 32*2^|z|)
///   III: 64 < |x||xi| < 1024*4^|z|
RegionLabel region_classify(const BumpChain& bc, const Vec3& x, const Vec3& xi);

}  // namespace gainterm::partitions
