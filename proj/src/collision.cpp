#include "gainterm/collision.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "gainterm/parallel.hpp"
#include "gainterm/rng.hpp"

namespace gainterm::collision {

namespace {

constexpr double kTiny = 1e-300;

double pow_gamma(double r, double g) {
  if (g == 0.0) return 1.0;
  if (g == 1.0) return r;
  if (g == 0.5) return std::sqrt(r);
  return std::pow(r, g);
}

struct Compiled {
  bool flat{false};
  bool is_complex{false};
  std::vector<GaussComponent> comps;
  std::vector<double> inv2w2;
  const AnalyticFn* fn{nullptr};
  double peak{0.0};

  cplx eval(const Vec3& v) const {
    if (!flat) return fn->eval(v);
    cplx acc{};
    for (std::size_t k = 0; k < comps.size(); ++k) {
      const auto& c = comps[k];
      double e = std::exp(-norm2(v - c.center) * inv2w2[k]);
      if (is_complex)
        acc += c.amp * e * std::polar(1.0, dot(c.wavevec, v));
      else
        acc += c.amp.real() * e;
    }
    return acc;
  }
};

Compiled compile(const AnalyticFn& f) {
  Compiled c;
  c.fn = &f;
  c.flat = f.flatten(c.comps);
  if (!c.flat) {
    c.comps.clear();
    return c;
  }
  for (const auto& g : c.comps) {
    c.inv2w2.push_back(1.0 / (2.0 * g.width * g.width));
    c.peak += std::abs(g.amp);
    if (norm2(g.wavevec) != 0.0 || g.amp.imag() != 0.0) c.is_complex = true;
  }
  return c;
}

// Monotone upper bound of max_{r1^2+r2^2=E^2} env_f(r1) env_g(r2); a floor
// lookup then stays conservative between table entries.
struct PairSkip {
  bool active{false};
  double de{1.0}, scale{0.0};
  std::vector<double> table;

  static PairSkip build(const Compiled& f, const Compiled& g, double emax) {
    PairSkip ps;
    if (!f.flat || !g.flat || f.comps.empty() || g.comps.empty()) return ps;
    const int ne = 256, na = 64;
    ps.de = emax / ne;
    ps.table.resize(ne + 2);
    for (int i = 0; i < ne + 2; ++i) {
      double E = i * ps.de;
      double best = 0.0;
      // staggered angles keep the bound rigorous between samples
      for (int a = 0; a < na; ++a) {
        double a0 = 0.5 * M_PI * a / na, a1 = 0.5 * M_PI * (a + 1) / na;
        best = std::max(best, mixture_envelope(f.comps, E * std::cos(a1)) *
                                  mixture_envelope(g.comps, E * std::sin(a0)));
      }
      ps.table[i] = best;
    }
    ps.scale = ps.table[0];
    ps.active = ps.scale > 0.0;
    return ps;
  }

  bool should_skip(double E, double r, double tau) const {
    if (!active || tau <= 0.0) return false;
    std::size_t idx =
        std::min<std::size_t>(static_cast<std::size_t>(E / de), table.size() - 1);
    return std::max(1.0, r) * table[idx] <= tau * scale;
  }
};

struct PhiTable {
  std::vector<double> c, s;
  explicit PhiTable(int nphi) : c(nphi), s(nphi) {
    for (int j = 0; j < nphi; ++j) {
      c[j] = std::cos(2.0 * M_PI * j / nphi);
      s[j] = std::sin(2.0 * M_PI * j / nphi);
    }
  }
};

// Values of a compiled function on the circle p(phi) = P + sign*R*e(phi),
// e(phi) = e1 cos(phi) + e2 sin(phi). out_im may be null for real mixtures.
void values_on_circle(const Compiled& fn, const Vec3& P, double R, double sign,
                      const Frame& fr, const PhiTable& ph, double* out_re,
                      double* out_im) {
  const int n = static_cast<int>(ph.c.size());
  if (!fn.flat) {
    for (int j = 0; j < n; ++j) {
      Vec3 p = P + (fr.e1 * ph.c[j] + fr.e2 * ph.s[j]) * (sign * R);
      cplx v = fn.fn->eval(p);
      out_re[j] = v.real();
      if (out_im) out_im[j] = v.imag();
    }
    return;
  }
  std::fill(out_re, out_re + n, 0.0);
  if (out_im) std::fill(out_im, out_im + n, 0.0);
  for (std::size_t k = 0; k < fn.comps.size(); ++k) {
    const auto& c = fn.comps[k];
    const Vec3 d = P - c.center;
    const double kk = fn.inv2w2[k];
    // |p(phi) - center|^2 = |d|^2 + R^2 + 2 sign R d.e(phi)
    const double a0 = -kk * (dot(d, d) + R * R);
    const double a1 = -2.0 * sign * R * kk * dot(d, fr.e1);
    const double a2 = -2.0 * sign * R * kk * dot(d, fr.e2);
    if (!fn.is_complex) {
      const double amp = c.amp.real();
      for (int j = 0; j < n; ++j)
        out_re[j] += amp * std::exp(a0 + a1 * ph.c[j] + a2 * ph.s[j]);
    } else {
      const double p0 = dot(c.wavevec, P);
      const double p1 = sign * R * dot(c.wavevec, fr.e1);
      const double p2 = sign * R * dot(c.wavevec, fr.e2);
      const double ar = c.amp.real(), ai = c.amp.imag();
      for (int j = 0; j < n; ++j) {
        double e = std::exp(a0 + a1 * ph.c[j] + a2 * ph.s[j]);
        double phase = p0 + p1 * ph.c[j] + p2 * ph.s[j];
        double cp = std::cos(phase), sp = std::sin(phase);
        out_re[j] += e * (ar * cp - ai * sp);
        out_im[j] += e * (ar * sp + ai * cp);
      }
    }
  }
}

struct SweepScratch {
  std::vector<double> fre, fim, gre, gim;
  std::vector<cplx> S;
  std::vector<double> r, scut;
  std::vector<cplx> red;
};

SweepScratch& scratch() {
  static thread_local SweepScratch s;
  return s;
}

const PhiTable& phi_table(int nphi) {
  static thread_local std::unique_ptr<PhiTable> cache;
  static thread_local int cached_n = -1;
  if (cached_n != nphi) {
    cache = std::make_unique<PhiTable>(nphi);
    cached_n = nphi;
  }
  return *cache;
}

/// Gamma-free inner sums S_i = sum_omega w mu f(v') g(v'_*) for one output
/// velocity against every v_* node. G may be null (treated as g == 1, which
/// turns the sweep into the plain angular transform of f). mask, when
/// non-empty, zeroes pairs the caller proved negligible.
void pair_sweep(const Compiled& F, const Compiled* G, const Vec3& v,
                std::span<const Vec3> vstar, const quadrature::SphereQuadrature& sph,
                const PairSkip& skip, double tau,
                std::span<const unsigned char> mask,
                const partitions::BumpChain& bc, SweepScratch& sc) {
  const int nphi = sph.nphi;
  const PhiTable& ph = phi_table(nphi);

  const std::size_t nv = vstar.size();
  sc.S.assign(nv, cplx{});
  sc.r.assign(nv, 0.0);
  sc.scut.assign(nv, 0.0);
  sc.fre.resize(nphi);
  sc.fim.resize(nphi);
  sc.gre.resize(nphi);
  sc.gim.resize(nphi);

  double wmu_mu = 0.0;
  for (std::size_t i = 0; i < sph.mu.size(); ++i) wmu_mu += sph.wmu[i] * sph.mu[i];
  const double angular_mass = wmu_mu * 2.0 * M_PI;  // == pi for exact rules

  const bool fcx = F.is_complex || !F.flat;
  const bool gcx = G && (G->is_complex || !G->flat);
  const bool cx = fcx || gcx;
  const double wphi = sph.wphi();
  const double E0 = norm2(v);

  for (std::size_t i = 0; i < nv; ++i) {
    if (!mask.empty() && !mask[i]) continue;
    const Vec3 vs = vstar[i];
    const Vec3 z = v - vs;
    const double r2 = norm2(z);
    sc.scut[i] = bc.s_cut(std::sqrt(r2));
    if (r2 == 0.0) {
      cplx val = F.eval(v);
      if (G) val *= G->eval(v);
      sc.S[i] = angular_mass * val;
      continue;
    }
    const double r = std::sqrt(r2);
    sc.r[i] = r;
    if (G && skip.should_skip(std::sqrt(E0 + norm2(vs)), r, tau)) continue;

    const Vec3 u = z / r;
    const Frame fr = axis_frame(u);
    cplx S{};
    for (std::size_t im = 0; im < sph.mu.size(); ++im) {
      const double m = sph.mu[im];
      const double R = r * m * std::sqrt(std::max(0.0, 1.0 - m * m));
      const Vec3 Pf = v - u * (r * m * m);
      values_on_circle(F, Pf, R, -1.0, fr, ph, sc.fre.data(),
                       cx ? sc.fim.data() : nullptr);
      if (G) {
        const Vec3 Pg = vs + u * (r * m * m);
        values_on_circle(*G, Pg, R, +1.0, fr, ph, sc.gre.data(),
                         cx ? sc.gim.data() : nullptr);
      }
      if (!cx) {
        double row = 0.0;
        if (G)
          for (int j = 0; j < nphi; ++j) row += sc.fre[j] * sc.gre[j];
        else
          for (int j = 0; j < nphi; ++j) row += sc.fre[j];
        S += sph.wmu[im] * m * row;
      } else {
        double rr = 0.0, ri = 0.0;
        if (G) {
          for (int j = 0; j < nphi; ++j) {
            rr += sc.fre[j] * sc.gre[j] - sc.fim[j] * sc.gim[j];
            ri += sc.fre[j] * sc.gim[j] + sc.fim[j] * sc.gre[j];
          }
        } else {
          for (int j = 0; j < nphi; ++j) {
            rr += sc.fre[j];
            ri += sc.fim[j];
          }
        }
        S += sph.wmu[im] * m * cplx{rr, ri};
      }
    }
    sc.S[i] = S * wphi;
  }
}

cplx reduce_sweep(SweepScratch& sc, double gamma, Cutoff cutoff) {
  const std::size_t n = sc.S.size();
  sc.red.assign(n, cplx{});
  for (std::size_t i = 0; i < n; ++i) {
    double w = pow_gamma(sc.r[i], gamma);
    if (cutoff == Cutoff::Small) w *= sc.scut[i];
    else if (cutoff == Cutoff::Large) w *= 1.0 - sc.scut[i];
    sc.red[i] = w * sc.S[i];
  }
  return pairwise_sum(std::span<const cplx>(sc.red));
}

std::vector<Vec3> lattice_nodes(const grid::VelocityGrid& g) {
  std::vector<Vec3> nodes;
  nodes.reserve(g.size());
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) nodes.push_back(g.node(i, j, k));
  return nodes;
}

}  // namespace

KernelSpec KernelSpec::make(double gamma, Cutoff cutoff) {
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw std::invalid_argument("KernelSpec: gamma must lie in [0,1]");
  return {gamma, cutoff};
}

QuadConfig QuadConfig::make_default(const grid::VelocityGrid& vstar, int nmu,
                                    int nphi, double tail_cutoff) {
  return {quadrature::SphereQuadrature::make(nmu, nphi), vstar, tail_cutoff, 0};
}

std::vector<QplusTriple> qplus_grid_multi(const AnalyticFn& f, const AnalyticFn& g,
                                          const grid::VelocityGrid& out,
                                          std::span<const double> gammas,
                                          const QuadConfig& quad,
                                          const partitions::BumpChain& bc) {
  if (gammas.empty()) throw std::invalid_argument("qplus_grid_multi: no gammas");
  const Compiled F = compile(f), G = compile(g);
  const auto vstar = lattice_nodes(quad.vstar_grid);
  const double emax = std::sqrt(3.0 * (std::pow(out.half_width, 2) +
                                       std::pow(quad.vstar_grid.half_width, 2)));
  const PairSkip skip = PairSkip::build(F, G, emax + 1.0);
  const double cell = std::pow(quad.vstar_grid.h(), 3);

  std::vector<QplusTriple> res;
  res.reserve(gammas.size());
  for (std::size_t gi = 0; gi < gammas.size(); ++gi)
    res.push_back({grid::GridFunction::zeros(out), grid::GridFunction::zeros(out),
                   grid::GridFunction::zeros(out)});

  const auto points = lattice_nodes(out);
  parallel_for(
      points.size(),
      [&](std::size_t idx) {
        SweepScratch& sc = scratch();
        pair_sweep(F, &G, points[idx], vstar, quad.sphere, skip, quad.tail_cutoff,
                   {}, bc, sc);
        for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
          res[gi].full.values[idx] = cell * reduce_sweep(sc, gammas[gi], Cutoff::Full);
          res[gi].small.values[idx] =
              cell * reduce_sweep(sc, gammas[gi], Cutoff::Small);
          res[gi].large.values[idx] =
              cell * reduce_sweep(sc, gammas[gi], Cutoff::Large);
        }
      },
      quad.threads);
  return res;
}

grid::GridFunction qplus_eval(const AnalyticFn& f, const AnalyticFn& g,
                              const grid::VelocityGrid& out, const KernelSpec& kernel,
                              const QuadConfig& quad, const partitions::BumpChain& bc) {
  const double gammas[1] = {kernel.gamma};
  auto triple = qplus_grid_multi(f, g, out, gammas, quad, bc);
  switch (kernel.cutoff) {
    case Cutoff::Small: return std::move(triple[0].small);
    case Cutoff::Large: return std::move(triple[0].large);
    case Cutoff::Full: break;
  }
  return std::move(triple[0].full);
}

std::vector<cplx> qplus_points(const AnalyticFn& f, const AnalyticFn& g,
                               std::span<const Vec3> points, const KernelSpec& kernel,
                               const QuadConfig& quad, const partitions::BumpChain& bc) {
  if (points.empty()) throw std::invalid_argument("qplus_points: empty output set");
  const Compiled F = compile(f), G = compile(g);
  const auto vstar = lattice_nodes(quad.vstar_grid);
  const PairSkip no_skip;
  const double cell = std::pow(quad.vstar_grid.h(), 3);
  std::vector<cplx> out(points.size());
  parallel_for(
      points.size(),
      [&](std::size_t idx) {
        SweepScratch& sc = scratch();
        pair_sweep(F, &G, points[idx], vstar, quad.sphere, no_skip, 0.0, {}, bc, sc);
        out[idx] = cell * reduce_sweep(sc, kernel.gamma, kernel.cutoff);
      },
      quad.threads);
  return out;
}

cplx loss_eval(const AnalyticFn& g, const Vec3& v, const KernelSpec& kernel,
               const QuadConfig& quad, const partitions::BumpChain& bc) {
  const auto vstar = lattice_nodes(quad.vstar_grid);
  std::vector<cplx> terms(vstar.size());
  for (std::size_t i = 0; i < vstar.size(); ++i) {
    double r = norm(v - vstar[i]);
    double w = pow_gamma(r, kernel.gamma);
    if (kernel.cutoff == Cutoff::Small) w *= bc.s_cut(r);
    else if (kernel.cutoff == Cutoff::Large) w *= bc.s_bar(r);
    terms[i] = w * g.eval(vstar[i]);
  }
  return M_PI * std::pow(quad.vstar_grid.h(), 3) *
         pairwise_sum(std::span<const cplx>(terms));
}

namespace {

// sum_omega w mu h(center - t mu omega) about a unit axis
cplx angular_average(const Compiled& h, const Vec3& center, double t,
                     const Vec3& axis, const quadrature::SphereQuadrature& sph) {
  SweepScratch local;
  const Vec3 fake_star = center - axis * t;  // so that z = t * axis
  partitions::BumpChain bc_unused;
  PairSkip no_skip;
  pair_sweep(h, nullptr, center, std::span<const Vec3>(&fake_star, 1), sph,
             no_skip, 0.0, {}, bc_unused, local);
  return local.S[0];
}

}  // namespace

cplx radon_eval(const AnalyticFn& h, const Vec3& x, double gamma,
                RadonVariant variant, const quadrature::SphereQuadrature& sphere,
                const partitions::BumpChain& bc) {
  const double r = norm(x);
  if (r == 0.0) throw std::domain_error("radon_eval: zero x");
  double w = pow_gamma(r, gamma);
  if (variant == RadonVariant::TSmall) w *= bc.s_cut(r);
  return w * angular_average(compile(h), x, r, x / r, sphere);
}

cplx conjugated_radon(const AnalyticFn& h, const Vec3& v, const Vec3& v_star,
                      double gamma, RadonVariant variant,
                      const quadrature::SphereQuadrature& sphere,
                      const partitions::BumpChain& bc, bool* degenerate_pair) {
  const Vec3 z = v - v_star;
  const double r = norm(z);
  if (degenerate_pair) *degenerate_pair = (r == 0.0);
  if (r == 0.0) {
    if (gamma > 0.0) return 0.0;
    // axis-independent: h(v) times angular mass pi
    double w = (variant == RadonVariant::TSmall) ? bc.s_cut(0.0) : 1.0;
    return w * M_PI * h.eval(v);
  }
  double w = pow_gamma(r, gamma);
  if (variant == RadonVariant::TSmall) w *= bc.s_cut(r);
  return w * angular_average(compile(h), v, r, z / r, sphere);
}

cplx h_sbar_eval(const AnalyticFn& h, const Vec3& v, const Vec3& v_star,
                 double gamma, const quadrature::SphereQuadrature& sphere,
                 const partitions::BumpChain& bc) {
  const Vec3 z = v - v_star;
  const double r = norm(z);
  const double weight =
      std::pow(jbracket(v), -gamma) * std::pow(jbracket(v_star), -gamma);
  const double kin = bc.s_bar(r) * pow_gamma(r, gamma);
  if (kin == 0.0) return 0.0;
  return weight * kin * angular_average(compile(h), v, r, z / r, sphere);
}

std::vector<cplx> weak_form_rhs_multi(const AnalyticFn& f, const AnalyticFn& g,
                                      const AnalyticFn& h,
                                      std::span<const double> gammas, Cutoff cutoff,
                                      const QuadConfig& quad,
                                      const partitions::BumpChain& bc) {
  if (gammas.empty()) throw std::invalid_argument("weak_form_rhs_multi: no gammas");
  const Compiled H = compile(h);
  const auto nodes = lattice_nodes(quad.vstar_grid);
  const std::size_t nv = nodes.size();
  std::vector<cplx> fv(nv), gv(nv);
  double fmax = 0.0, gmax = 0.0;
  for (std::size_t i = 0; i < nv; ++i) {
    fv[i] = f.eval(nodes[i]);
    gv[i] = g.eval(nodes[i]);
    fmax = std::max(fmax, std::abs(fv[i]));
    gmax = std::max(gmax, std::abs(gv[i]));
  }
  const double tau = quad.tail_cutoff;
  const double cell = std::pow(quad.vstar_grid.h(), 3);
  const PairSkip no_skip;

  std::vector<std::vector<cplx>> per_v(gammas.size());
  for (auto& p : per_v) p.assign(nv, cplx{});

  parallel_for(
      nv,
      [&](std::size_t iv) {
        const double fscale = std::abs(fv[iv]);
        if (tau > 0.0 && fscale * gmax <= tau * fmax * gmax) return;
        std::vector<unsigned char> mask;
        if (tau > 0.0) {
          mask.resize(nv);
          for (std::size_t is = 0; is < nv; ++is)
            mask[is] = fscale * std::abs(gv[is]) > tau * fmax * gmax;
        }
        SweepScratch& sc = scratch();
        pair_sweep(H, nullptr, nodes[iv], nodes, quad.sphere, no_skip, 0.0, mask,
                   bc, sc);
        // fold g(v_*) into the gamma-free sums, then reduce per gamma
        for (std::size_t is = 0; is < nv; ++is) sc.S[is] *= gv[is];
        for (std::size_t gi = 0; gi < gammas.size(); ++gi)
          per_v[gi][iv] = fv[iv] * cell * reduce_sweep(sc, gammas[gi], cutoff);
      },
      quad.threads);

  std::vector<cplx> out(gammas.size());
  for (std::size_t gi = 0; gi < gammas.size(); ++gi)
    out[gi] = cell * pairwise_sum(std::span<const cplx>(per_v[gi]));
  return out;
}

cplx weak_form_rhs(const AnalyticFn& f, const AnalyticFn& g, const AnalyticFn& h,
                   const KernelSpec& kernel, const QuadConfig& quad,
                   const partitions::BumpChain& bc) {
  const double gammas[1] = {kernel.gamma};
  return weak_form_rhs_multi(f, g, h, gammas, kernel.cutoff, quad, bc)[0];
}

OracleResult qplus_oracle(const AnalyticFn& f, const AnalyticFn& g, const Vec3& v,
                          const KernelSpec& kernel, const partitions::BumpChain& bc,
                          const OracleOptions& opt) {
  if (opt.theta_nodes < 3 || opt.theta_nodes % 2 == 0)
    throw std::invalid_argument("qplus_oracle: theta_nodes must be odd and >= 3");
  // Simpson in theta with the sin(theta) Jacobian folded into the weights
  quadrature::SphereQuadrature sph;
  sph.nphi = opt.phi_nodes;
  const int nt = opt.theta_nodes;
  const double dth = 0.5 * M_PI / (nt - 1);
  for (int i = 0; i < nt; ++i) {
    double th = i * dth;
    double w = (i == 0 || i == nt - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    sph.mu.push_back(std::cos(th));
    sph.wmu.push_back(w * dth / 3.0 * std::sin(th));
  }

  const Compiled F = compile(f), G = compile(g);
  Rng rng(opt.seed);
  const Vec3 delta{rng.uniform(), rng.uniform(), rng.uniform()};
  const PairSkip no_skip;

  OracleResult res;
  for (int level = 0; level < 3; ++level) {
    const double s = opt.coarse_spacing / std::ldexp(1.0, level);
    // lattice anchored at v so the fractional offset is level-independent
    auto axis_range = [&](double va, double dfrac) {
      int lo = static_cast<int>(std::ceil((-opt.box_half_width - va) / s - dfrac));
      int hi = static_cast<int>(std::floor((opt.box_half_width - va) / s - dfrac));
      return std::pair<int, int>(lo, hi);
    };
    auto [xlo, xhi] = axis_range(v.x, delta.x);
    auto [ylo, yhi] = axis_range(v.y, delta.y);
    auto [zlo, zhi] = axis_range(v.z, delta.z);
    std::vector<Vec3> nodes;
    nodes.reserve(static_cast<std::size_t>(xhi - xlo + 1) * (yhi - ylo + 1) *
                  (zhi - zlo + 1));
    for (int i = xlo; i <= xhi; ++i)
      for (int j = ylo; j <= yhi; ++j)
        for (int k = zlo; k <= zhi; ++k)
          nodes.push_back(v + Vec3{(i + delta.x) * s, (j + delta.y) * s,
                                   (k + delta.z) * s});
    SweepScratch& sc = scratch();
    pair_sweep(F, &G, v, nodes, sph, no_skip, 0.0, {}, bc, sc);
    res.levels.push_back(s * s * s * reduce_sweep(sc, kernel.gamma, kernel.cutoff));
  }

  const cplx d1 = res.levels[1] - res.levels[0];
  const cplx d2 = res.levels[2] - res.levels[1];
  const double scale = std::max(std::abs(res.levels[2]), 1e-30);
  if (std::abs(d2) <= 1e-12 * scale) {
    res.value = res.levels[2];
    res.converged = true;
    return res;
  }
  if (std::abs(d1) <= kTiny) {
    res.value = res.levels[2];
    return res;
  }
  const cplx q = d2 / d1;
  res.observed_order = -std::log2(std::max(std::abs(q), 1e-12));
  if (std::abs(q) < 0.85) {
    res.value = res.levels[2] + d2 * q / (1.0 - q);
    res.converged = true;
  } else {
    res.value = res.levels[2];
  }
  return res;
}

}  // namespace gainterm::collision
