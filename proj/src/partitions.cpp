#include "gainterm/partitions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gainterm::partitions {

double BumpChain::step01(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  if (ramp_ == Ramp::Quintic) return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double BumpChain::psi(double r) const { return step01((16.0 - r) / 8.0); }

double BumpChain::rho(double r) const { return psi(r) - psi(2.0 * r); }

double BumpChain::rho_k(int k, double r) const {
  return rho(std::ldexp(r, -k));
}

double BumpChain::s_cut(double r) const {
  // sum_{k<=0} rho(2^-k r) telescopes to psi(r); continuous limit 1 at r=0
  return psi(r);
}

double BumpChain::s_bar(double r) const { return 1.0 - psi(r); }

double BumpChain::psi_ang(double t) const {
  return step01((M_PI / 2.0 - t) / (M_PI / 4.0));
}

double BumpChain::zeta(double t) const { return psi_ang(t) - psi_ang(2.0 * t); }

double BumpChain::zeta_z(int z, double t) const {
  if (z > 0) return zeta(std::ldexp(t, z));
  if (z < 0) return zeta(std::ldexp(M_PI - t, -z));
  // remainder piece, 1 near pi/2, reflected smoothly across it
  double s = (t <= M_PI / 2.0) ? t : M_PI - t;
  if (s <= 0.0) return 0.0;
  return 1.0 - psi_ang(2.0 * s);
}

double radial_partition(const BumpChain& bc, RadialKind kind, int k, double r) {
  if (r < 0.0) throw std::domain_error("radial_partition: negative radius");
  switch (kind) {
    case RadialKind::Rho:
    case RadialKind::ChiK:
      return bc.rho_k(k, r);
    case RadialKind::SCut:
      return bc.s_cut(r);
    case RadialKind::SBar:
      return bc.s_bar(r);
  }
  return 0.0;
}

namespace {
double pair_angle(const Vec3& x, const Vec3& xi) {
  double nx = norm(x), nxi = norm(xi);
  if (nx == 0.0 || nxi == 0.0)
    throw std::domain_error("angular partition: zero input");
  return std::acos(std::clamp(dot(x, xi) / (nx * nxi), -1.0, 1.0));
}
}  // namespace

double angular_partition(const BumpChain& bc, int z, const Vec3& x, const Vec3& xi) {
  return bc.zeta_z(z, pair_angle(x, xi));
}

const char* to_string(Coarse c) {
  switch (c) {
    case Coarse::A: return "A";
    case Coarse::B1: return "B1";
    case Coarse::B2: return "B2";
    case Coarse::C1: return "C1";
    case Coarse::C2: return "C2";
  }
  return "?";
}

const char* to_string(Zone z) {
  switch (z) {
    case Zone::I: return "I";
    case Zone::II: return "II";
    case Zone::III: return "III";
    case Zone::None: return "none";
  }
  return "?";
}

RegionLabel region_classify(const BumpChain& bc, const Vec3& x, const Vec3& xi) {
  const double nx = norm(x), nxi = norm(xi);
  if (nx == 0.0 || nxi == 0.0)
    throw std::domain_error("region_classify: zero input");
  const double prod = nx * nxi;
  const double theta0 = pair_angle(x, xi);

  RegionLabel out;
  if (nx > 8.0 && nxi > 8.0) out.coarse = Coarse::A;
  else if (prod > 64.0 && nx > 8.0 && nxi < 16.0) out.coarse = Coarse::B1;
  else if (prod > 64.0 && nx < 16.0) out.coarse = Coarse::B2;
  else if (prod < 512.0 && nx > 8.0) out.coarse = Coarse::C1;
  else out.coarse = Coarse::C2;

  const double margin = std::min(theta0, M_PI - theta0);
  if (margin > 1e-12) {
    // dominant cone: argmax of zeta_z, ties broken toward small |z|, then +z
    int zmax = std::min(60, static_cast<int>(std::ceil(std::log2(M_PI / margin))) + 3);
    int best = 0;
    double best_val = bc.zeta_z(0, theta0);
    for (int a = 1; a <= zmax; ++a) {
      for (int z : {a, -a}) {
        double v = bc.zeta_z(z, theta0);
        if (v > best_val + 1e-15) {
          best_val = v;
          best = z;
        }
      }
    }
    out.cone = best;
  }

  if (out.coarse == Coarse::A && out.cone) {
    const int z = *out.cone;
    if (z == 0) {
      out.zone = Zone::I;
    } else {
      const double p2 = std::ldexp(1.0, std::abs(z));   // 2^|z|
      const double p4 = p2 * p2;                        // 4^|z|
      const double rmin = std::min(nx, nxi);
      if (nx > 8.0 * p2 && nxi > 8.0 * p2) out.zone = Zone::I;
      else if (prod > 64.0 * p4 && rmin > 8.0 && rmin < 32.0 * p2) out.zone = Zone::II;
      else if (prod > 64.0 && prod < 1024.0 * p4) out.zone = Zone::III;
      else out.zone = Zone::None;
    }
  }
  return out;
}

}  // namespace gainterm::partitions
