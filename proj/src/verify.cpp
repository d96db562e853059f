#include "gainterm/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>

#include "gainterm/collision.hpp"
#include "gainterm/geometry.hpp"
#include "gainterm/grid.hpp"
#include "gainterm/parallel.hpp"
#include "gainterm/partitions.hpp"
#include "gainterm/rng.hpp"
#include "gainterm/symbol.hpp"

namespace gainterm::verify {

namespace {

using collision::Cutoff;
using collision::KernelSpec;
using collision::QuadConfig;
using grid::GridFunction;
using grid::NormSpec;
using grid::VelocityGrid;
using partitions::BumpChain;
using report::EstimateReport;
using cplx = std::complex<double>;

constexpr double kPi = M_PI;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double lap() {
    auto t1 = std::chrono::steady_clock::now();
    double s = std::chrono::duration<double>(t1 - t0).count();
    t0 = t1;
    return s;
  }
};

BumpChain make_chain(const Config& cfg) {
  return BumpChain(cfg.ramp == "quintic" ? partitions::Ramp::Quintic
                                         : partitions::Ramp::Exp);
}

EstimateReport new_report(const Config& cfg, const std::string& suite,
                          std::uint64_t seed) {
  EstimateReport r;
  r.suite = suite;
  r.seed = seed;
  r.config_hash = cfg.hash();
  r.config_text = cfg.canonical_text();
  return r;
}

double rel_diff(double a, double b) {
  return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), 1e-300});
}

double rel_diff(cplx a, cplx b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

/// Analytic L1 norm of a nonnegative Gaussian mixture.
double mixture_l1(const AnalyticFn& f) {
  std::vector<GaussComponent> comps;
  if (!f.flatten(comps)) throw std::runtime_error("mixture_l1: not a mixture");
  double acc = 0.0;
  for (const auto& c : comps)
    acc += c.amp.real() * std::pow(2.0 * kPi, 1.5) * std::pow(c.width, 3);
  return acc;
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Random trial family: gaussian mixtures with centers in [-3,3]^3, widths in
// [0.5,2], up to 3 components; some trials carry a plane-wave modulation.
AnalyticFnPtr random_mixture(Rng& rng, bool allow_modulation) {
  int k = static_cast<int>(rng.integer(1, 3));
  std::vector<AnalyticFnPtr> terms;
  for (int i = 0; i < k; ++i) {
    Vec3 c = rng.box(3.0);
    double w = rng.uniform(0.5, 2.0);
    double a = rng.uniform(0.3, 1.5);
    AnalyticFnPtr g = make_gaussian(c, w, a);
    if (allow_modulation && rng.uniform() < 0.2)
      g = make_modulated(g, rng.box(2.0));
    terms.push_back(g);
  }
  return terms.size() == 1 ? terms[0] : make_sum(std::move(terms));
}

// Mean-zero difference of gaussians, amplitude-balanced against the lattice
// sums on this grid so the zero Fourier mode vanishes to rounding.
AnalyticFnPtr mean_zero_pair(Rng& rng, const VelocityGrid& g) {
  Vec3 c1 = rng.box(2.0), c2 = rng.box(2.0);
  double w1 = rng.uniform(0.8, 1.6), w2 = rng.uniform(0.8, 1.6);
  auto lattice_sum = [&](const Vec3& c, double w) {
    double acc = 0.0;
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j)
        for (int k = 0; k < g.n; ++k)
          acc += std::exp(-norm2(g.node(i, j, k) - c) / (2.0 * w * w));
    return acc;
  };
  double s1 = lattice_sum(c1, w1), s2 = lattice_sum(c2, w2);
  return make_sum({make_gaussian(c1, w1, 1.0), make_gaussian(c2, w2, -s1 / s2)});
}

GridFunction sample(const AnalyticFn& f, const VelocityGrid& g) {
  return grid::sample_on_grid(f, g, 1e-10, grid::GuardPolicy::Ignore).gf;
}

cplx grid_inner(const GridFunction& a, const GridFunction& b) {
  // plain (unconjugated) pairing, matching <f,g> = int f g
  std::vector<cplx> terms(a.values.size());
  for (std::size_t i = 0; i < a.values.size(); ++i)
    terms[i] = a.values[i] * b.values[i];
  return pairwise_sum(std::span<const cplx>(terms)) * std::pow(a.grid.h(), 3);
}

cplx grid_integral(const GridFunction& a) {
  return pairwise_sum(std::span<const cplx>(a.values)) * std::pow(a.grid.h(), 3);
}

}  // namespace

// ---------------------------------------------------------------------------
// partition suite
// ---------------------------------------------------------------------------

EstimateReport partition_suite(const Config& cfg) {
  EstimateReport rep = new_report(cfg, "partition", cfg.seed);
  Timer timer;

  for (const char* ramp_name : {"exp", "quintic"}) {
    BumpChain bc(ramp_name == std::string("exp") ? partitions::Ramp::Exp
                                                 : partitions::Ramp::Quintic);
    const std::string tag = std::string("[") + ramp_name + "] ";

    // telescoping sum over 200 log-spaced radii
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      double r = std::pow(10.0, -3.0 + 9.0 * i / 199.0);
      double s = 0.0;
      for (int k = -40; k <= 40; ++k) s += bc.rho_k(k, r);
      worst = std::max(worst, std::fabs(s - 1.0));
    }
    rep.add_check(tag + "radial telescoping |sum rho - 1|", worst < cfg.tol_partition,
                  worst, cfg.tol_partition);

    // support of rho inside (4,16)
    double outside = 0.0;
    for (double r : {0.0, 1.0, 3.999, 4.0, 16.0, 16.5, 100.0})
      outside = std::max(outside, bc.rho(r));
    rep.add_check(tag + "rho vanishes off (4,16)", outside == 0.0, outside, 0.0);

    // octave separation
    double overlap = 0.0;
    for (int i = 0; i < 400; ++i) {
      double r = std::pow(10.0, -2.0 + 6.0 * i / 399.0);
      for (int j = -12; j <= 12; ++j)
        for (int k = j + 2; k <= j + 4; ++k)
          overlap = std::max(overlap, bc.rho_k(j, r) * bc.rho_k(k, r));
    }
    rep.add_check(tag + "rho octave disjointness", overlap == 0.0, overlap, 0.0);

    // small-velocity cutoff values and monotonicity
    bool s_ok = bc.s_cut(0.0) == 1.0 && bc.s_cut(2.0) == 1.0 &&
                bc.s_cut(3.9) == 1.0 && std::fabs(bc.s_cut(16.1)) < 1e-12 &&
                bc.s_cut(20.0) == 0.0;
    rep.add_check(tag + "s_cut knots (1 below 4, 0 above 16)", s_ok,
                  bc.s_cut(3.9) - bc.s_cut(20.0), 1.0);
    double comp = 0.0, mono = 0.0;
    double prev = 2.0;
    for (int i = 0; i < 10000; ++i) {
      double r = 24.0 * i / 9999.0;
      comp = std::max(comp, std::fabs(bc.s_cut(r) + bc.s_bar(r) - 1.0));
      double s = bc.s_cut(r);
      mono = std::max(mono, s - prev);
      prev = s;
    }
    rep.add_check(tag + "s + sbar == 1", comp == 0.0, comp, 0.0);
    rep.add_check(tag + "s monotone non-increasing", mono <= 0.0, mono, 0.0);

    // angular family
    double asum_worst = 0.0;
    Rng rng(cfg.seed);
    for (int t = 0; t < 100; ++t) {
      double th = rng.uniform(0.01, kPi - 0.01);
      double s = bc.zeta_z(0, th);
      for (int z = 1; z <= 40; ++z) s += bc.zeta_z(z, th) + bc.zeta_z(-z, th);
      asum_worst = std::max(asum_worst, std::fabs(s - 1.0));
    }
    rep.add_check(tag + "angular partition of unity", asum_worst < 1e-10,
                  asum_worst, 1e-10);
    rep.add_check(tag + "zeta_0(pi/2) == 1", bc.zeta_z(0, kPi / 2) == 1.0,
                  bc.zeta_z(0, kPi / 2), 1.0);
    double mid_sum = bc.zeta_z(3, kPi / 64) + bc.zeta_z(4, kPi / 64) +
                     bc.zeta_z(5, kPi / 64);
    rep.add_check(tag + "cone cover at pi/2^6", std::fabs(mid_sum - 1.0) < 1e-12,
                  mid_sum, 1.0);
  }

  // region classifier anchors (ramp-independent)
  BumpChain bc = make_chain(cfg);
  using partitions::Coarse;
  using partitions::Zone;
  auto l1 = partitions::region_classify(bc, {0, 0, 100}, {100, 0, 0});
  rep.add_check("classify (100 e3, 100 e1) -> A/z0/I",
                l1.coarse == Coarse::A && l1.cone && *l1.cone == 0 &&
                    l1.zone == Zone::I,
                0.0, 0.0, std::string(to_string(l1.coarse)) + "/" +
                              to_string(l1.zone));
  auto l2 = partitions::region_classify(bc, {0, 0, 100}, {0.01, 0, 0.0001});
  rep.add_check("classify tiny xi -> C1", l2.coarse == Coarse::C1, 0.0, 0.0,
                to_string(l2.coarse));
  auto l3 = partitions::region_classify(bc, {0, 0, 1000}, {0.1, 0, 0});
  rep.add_check("classify (1000 e3, 0.1 e1) -> B1", l3.coarse == Coarse::B1, 0.0,
                0.0, to_string(l3.coarse));

  rep.aggregates["runtime_sec"] = 0.0;  // canonical artifacts carry no timing
  rep.timings_sec.emplace_back("total", timer.lap());
  return rep;
}

// ---------------------------------------------------------------------------
// geometry suite
// ---------------------------------------------------------------------------

namespace {

// covariant Hessian of phase_sigma by central differences (the gradient terms
// vanish at critical points but are kept for correctness)
geometry::Mat2 fd_hessian(const Vec3& x, const Vec3& xi, const SpherePoint& w) {
  const double h = 2e-4;
  auto f = [&](double dt, double dp) {
    return geometry::phase_sigma(x, xi, {w.theta + dt, w.phi + dp});
  };
  const double st = std::sin(w.theta), ct = std::cos(w.theta);
  double ftt = (f(h, 0) - 2.0 * f(0, 0) + f(-h, 0)) / (h * h);
  double fpp = (f(0, h) - 2.0 * f(0, 0) + f(0, -h)) / (h * h);
  double ftp = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4.0 * h * h);
  double ft = (f(h, 0) - f(-h, 0)) / (2.0 * h);
  double fp = (f(0, h) - f(0, -h)) / (2.0 * h);
  geometry::Mat2 m;
  m.m[0][0] = ftt;
  m.m[0][1] = m.m[1][0] = ftp / st - ct / (st * st) * fp;
  m.m[1][1] = fpp / (st * st) + ct / st * ft;
  return m;
}

double mat_dev(const geometry::Mat2& a, const geometry::Mat2& b) {
  double d = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      d = std::max(d, std::fabs(a.m[i][j] - b.m[i][j]));
  return d;
}

}  // namespace

EstimateReport geometry_suite(const Config& cfg, std::uint64_t seed, int n_trials) {
  EstimateReport rep = new_report(cfg, "geometry", seed);
  Timer timer;
  Rng rng(seed);

  double max_grad = 0.0, max_hess = 0.0, max_inv = 0.0, max_cons = 0.0;
  double max_sigma_gap = 0.0, max_unit = 0.0;
  int degenerate_seen = 0;

  for (int t = 0; t < n_trials; ++t) {
    // non-colinear pair
    Vec3 x, xi;
    double ang;
    do {
      x = rng.unit_vector() * rng.log_uniform(0.2, 50.0);
      xi = rng.unit_vector() * rng.log_uniform(0.2, 50.0);
      ang = std::acos(std::clamp(dot(x, xi) / (norm(x) * norm(xi)), -1.0, 1.0));
    } while (ang < 0.05 || ang > kPi - 0.05);

    auto cp = geometry::critical_points(x, xi);
    max_unit = std::max({max_unit, std::fabs(norm(cp.omega_plus) - 1.0),
                         std::fabs(norm(cp.omega_minus) - 1.0)});
    max_sigma_gap =
        std::max(max_sigma_gap, std::fabs(cp.sigma_plus - cp.sigma_minus - 1.0));

    const Frame fr = axis_frame(normalized(x));
    for (int side = 0; side < 2; ++side) {
      const Vec3 w = side == 0 ? cp.omega_plus : cp.omega_minus;
      const auto& hess_ref = side == 0 ? cp.hess_plus : cp.hess_minus;
      auto sph = to_spherical(w, fr);
      SpherePoint pt{sph.theta, sph.phi};
      auto calc = geometry::sphere_calculus(x, xi, pt);
      max_grad = std::max(max_grad, std::hypot(calc.grad[0], calc.grad[1]));
      max_hess = std::max(max_hess, mat_dev(fd_hessian(x, xi, pt), hess_ref));
      max_hess = std::max(max_hess, mat_dev(calc.hess, hess_ref));
    }

    // involution + conservation on a random collision triple
    Vec3 v = rng.box(5.0), vs = rng.box(5.0), om = rng.unit_vector();
    auto [vp, vps] = geometry::pre_collision(v, vs, om);
    auto [v2, vs2] = geometry::pre_collision(vp, vps, om);
    max_inv = std::max({max_inv, norm(v2 - v), norm(vs2 - vs)});
    max_cons = std::max(max_cons, norm(vp + vps - v - vs));
    max_cons = std::max(max_cons, std::fabs(norm2(vp) + norm2(vps) - norm2(v) -
                                            norm2(vs)));
    if (cp.degenerate) ++degenerate_seen;
  }

  // degenerate handling
  auto dg = geometry::critical_points({0, 0, 2}, {0, 0, 3});
  rep.add_check("colinear pair flags degenerate",
                dg.degenerate && norm(dg.omega_plus - Vec3{0, 0, 1}) == 0.0 &&
                    dg.sigma_plus == 1.0 && dg.sigma_minus == 0.0,
                dg.sigma_plus, 1.0);

  rep.add_check("gradient at critical points", max_grad < 1e-9, max_grad, 1e-9);
  rep.add_check("Hessian vs finite differences", max_hess < 1e-6, max_hess, 1e-6);
  rep.add_check("pre-collision involution", max_inv < 1e-12, max_inv, 1e-12);
  rep.add_check("momentum/energy conservation", max_cons < 1e-12, max_cons, 1e-12);
  rep.add_check("unit critical directions", max_unit < 1e-12, max_unit, 1e-12);
  rep.add_check("sigma_plus - sigma_minus == 1", max_sigma_gap < 1e-12,
                max_sigma_gap, 1e-12);
  rep.add_check("no degenerate pairs sampled", degenerate_seen == 0,
                degenerate_seen, 0.0);

  rep.aggregates["max_grad"] = max_grad;
  rep.aggregates["max_hess_dev"] = max_hess;
  rep.aggregates["max_involution"] = max_inv;
  rep.aggregates["max_conservation"] = max_cons;
  rep.timings_sec.emplace_back("total", timer.lap());
  return rep;
}

// ---------------------------------------------------------------------------
// stationary decay suite
// ---------------------------------------------------------------------------

EstimateReport stationary_decay_suite(const Config& cfg,
                                      const std::vector<double>& gammas,
                                      const std::vector<double>& theta0s,
                                      const std::vector<double>& lambdas) {
  EstimateReport rep = new_report(cfg, "stationary_decay", cfg.seed);
  Timer timer;
  int trial = 0;

  // pinned closed form: colinear, gamma=1, |x|=|xi|=1
  {
    auto ev = symbol::symbol_direct_auto({0, 0, 1}, {0, 0, 1}, 1.0, cfg.node_mult);
    cplx want = kPi * (1.0 - std::exp(cplx{0.0, -1.0})) / cplx{0.0, 1.0};
    double err = std::abs(ev.value - want);
    rep.add_check("colinear closed form pi(1-e^{-i})/i", err < 1e-8, err, 1e-8);
  }

  // quadrature self-consistency at the node floor
  {
    Vec3 x{0, 0, std::sqrt(1000.0)}, xi{std::sqrt(1000.0), 0, 0};
    auto v1 = symbol::symbol_direct_auto(x, xi, 1.0, cfg.node_mult);
    int n2 = 2 * symbol::node_floor(1000.0, cfg.node_mult);
    auto q2 = quadrature::SphereQuadrature::make(n2, n2);
    auto v2 = symbol::symbol_direct(x, xi, 1.0, q2, cfg.node_mult);
    double d = std::abs(v1.value - v2.value);
    rep.add_check("node doubling stable at lambda=1e3", d < 1e-8, d, 1e-8);

    // conjugate symmetry and the scale pairing a(s x, xi/s) = a(x, xi)
    auto vc = symbol::symbol_direct_auto(x, -1.0 * xi, 1.0, cfg.node_mult);
    double dc = std::abs(vc.value - std::conj(v1.value));
    rep.add_check("conjugate symmetry a(x,-xi)=conj", dc < 1e-8, dc, 1e-8);
    auto vs = symbol::symbol_direct_auto(x * 4.0, xi / 4.0, 1.0, cfg.node_mult);
    double ds = std::abs(vs.value - v1.value);
    rep.add_check("scale pairing a(sx, xi/s)", ds < 1e-10, ds, 1e-10);
  }

  const double noise_floor = 1e-9;
  const double exact_band = 1e-6;
  for (double th : theta0s) {
    for (double g : gammas) {
      std::vector<double> lx, ly;
      double worst = 0.0;
      for (double lam : lambdas) {
        double rr = std::sqrt(lam);
        Vec3 x{0, 0, rr};
        Vec3 xi{rr * std::sin(th), 0, rr * std::cos(th)};
        auto cmpres = symbol::symbol_compare(x, xi, g, cfg.node_mult, cfg.lambda_min);
        worst = std::max(worst, cmpres.rel_err);
        report::TrialRow row;
        row.trial = trial++;
        row.metrics = {{"gamma", g},
                       {"theta0", th},
                       {"lambda", lam},
                       {"rel_err", cmpres.rel_err},
                       {"quad_re", cmpres.quad.value.real()},
                       {"quad_im", cmpres.quad.value.imag()},
                       {"stat_re", cmpres.stat.value.real()},
                       {"stat_im", cmpres.stat.value.imag()},
                       {"est_error", cmpres.stat.est_error.value_or(0.0)}};
        rep.trials.push_back(row);
        lx.push_back(std::log(lam));
        ly.push_back(std::log(std::max(cmpres.rel_err, 1e-300)));
      }
      char name[160];
      std::snprintf(name, sizeof name, "cell gamma=%g theta0=%.4f", g, th);
      if (worst < exact_band) {
        // remainder at the quadrature floor: the decay bound holds a fortiori;
        // the slope of pure noise is reported but not asserted
        double slope = worst > noise_floor ? fit_slope(lx, ly) : 0.0;
        rep.add_check(std::string(name) + " leading term exact (rel_err < 1e-6)",
                      true, worst, exact_band,
                      "slope of residual noise: " + std::to_string(slope));
      } else {
        double slope = fit_slope(lx, ly);
        rep.add_check(std::string(name) + " decay slope in [-1.3,-0.7]",
                      slope >= -1.3 && slope <= -0.7, slope, -1.0);
      }
    }
  }

  rep.aggregates["cells"] = static_cast<double>(theta0s.size() * gammas.size());
  rep.timings_sec.emplace_back("total", timer.lap());
  return rep;
}

// ---------------------------------------------------------------------------
// identity suite
// ---------------------------------------------------------------------------

EstimateReport identity_suite(const Config& cfg, std::uint64_t seed, int n_trials) {
  EstimateReport rep = new_report(cfg, "identity", seed);
  Timer timer;
  BumpChain bc = make_chain(cfg);
  Rng rng(seed);

  const VelocityGrid vg = VelocityGrid::make(cfg.out_n, cfg.grid_L);
  QuadConfig quad = QuadConfig::make_default(vg, cfg.mu_nodes, cfg.phi_nodes,
                                             cfg.tail_cutoff);
  quad.threads = cfg.threads;
  QuadConfig quad_exact = quad;  // no pair skip for the exact linear identities
  quad_exact.tail_cutoff = 0.0;

  auto f0 = make_gaussian({0, 0, 0}, 1.0, 1.0);
  auto g0 = make_gaussian({0.5, -0.3, 0.2}, 0.8, 1.0);

  // ---- mass identity (gamma = 0) with a coarse-lattice convergence ladder
  {
    const double gam[1] = {0.0};
    auto triple = collision::qplus_grid_multi(*f0, *g0, vg, gam, quad, bc);
    double mass = grid_integral(triple[0].full).real();
    double want = kPi * mixture_l1(*f0) * mixture_l1(*g0);
    double err = rel_diff(mass, want);
    rep.add_check("mass identity (gamma=0)", err < cfg.tol_mass, err, cfg.tol_mass);
    rep.timings_sec.emplace_back("mass", timer.lap());

    QuadConfig coarse = quad;
    coarse.vstar_grid = VelocityGrid::make(10, cfg.grid_L);
    auto t2 = collision::qplus_grid_multi(*f0, *g0, vg, gam, coarse, bc);
    double mass_coarse = grid_integral(t2[0].full).real();
    rep.aggregates["mass_coarse_rel_err"] = rel_diff(mass_coarse, want);
    rep.add_check("mass ladder fine level within 1e-5", rel_diff(mass, want) < 1e-5,
                  rel_diff(mass, want), 1e-5);
    rep.timings_sec.emplace_back("mass_coarse", timer.lap());
  }

  // ---- weak-form identity over gaussian triples, gamma in {0, 1/2, 1}
  {
    const std::vector<double> gammas{0.0, 0.5, 1.0};
    double worst = 0.0;
    int triples = std::max(1, n_trials);
    for (int t = 0; t < triples; ++t) {
      auto f = random_mixture(rng, false);
      auto g = random_mixture(rng, false);
      auto h = random_mixture(rng, false);
      auto triple = collision::qplus_grid_multi(*f, *g, vg, gammas, quad, bc);
      auto rhs = collision::weak_form_rhs_multi(*f, *g, *h, gammas, Cutoff::Full,
                                                quad, bc);
      GridFunction hs = sample(*h, vg);
      for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
        double d = rel_diff(grid_inner(triple[gi].full, hs), rhs[gi]);
        worst = std::max(worst, d);
        report::TrialRow row;
        row.trial = t;
        row.metrics = {{"gamma", gammas[gi]}, {"weak_rel_err", d}};
        rep.trials.push_back(row);
      }
    }
    rep.add_check("weak-form identity", worst < cfg.tol_weak, worst, cfg.tol_weak);
    rep.timings_sec.emplace_back("weak_form", timer.lap());
  }

  // ---- split / bilinearity / positivity / covariance / scaling at points
  {
    std::vector<Vec3> pts;
    for (int i = 0; i < 10; ++i) pts.push_back(rng.box(3.0));

    auto f = make_gaussian({0.4, 0, -0.2}, 0.8, 1.0);
    auto g = make_gaussian({-0.5, 0.3, 0}, 0.7, 0.9);

    auto kf = KernelSpec::make(0.5, Cutoff::Full);
    auto ks = KernelSpec::make(0.5, Cutoff::Small);
    auto kl = KernelSpec::make(0.5, Cutoff::Large);
    auto vf = collision::qplus_points(*f, *g, pts, kf, quad_exact, bc);
    auto vsm = collision::qplus_points(*f, *g, pts, ks, quad_exact, bc);
    auto vlg = collision::qplus_points(*f, *g, pts, kl, quad_exact, bc);
    double dsplit = 0.0, pos = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      dsplit = std::max(dsplit, std::abs(vf[i] - vsm[i] - vlg[i]));
      pos = std::min(pos, vf[i].real());
    }
    rep.add_check("split consistency full = small + large", dsplit < 1e-10,
                  dsplit, 1e-10);
    rep.add_check("positivity", pos > -1e-12, pos, -1e-12);

    // bilinearity
    auto f2 = make_gaussian({-0.6, 0.2, 0.5}, 0.9, 0.7);
    auto fsum = make_sum({make_dilated(f, 1.0), f2});  // f + f2
    auto alpha_f = make_gaussian({0.4, 0, -0.2}, 0.8, 2.5);  // 2.5 * f
    auto v_sum = collision::qplus_points(*fsum, *g, pts, kf, quad_exact, bc);
    auto v_f = vf;
    auto v_f2 = collision::qplus_points(*f2, *g, pts, kf, quad_exact, bc);
    auto v_alpha = collision::qplus_points(*alpha_f, *g, pts, kf, quad_exact, bc);
    double dbil = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      dbil = std::max(dbil, std::abs(v_sum[i] - v_f[i] - v_f2[i]));
      dbil = std::max(dbil, std::abs(v_alpha[i] - 2.5 * v_f[i]));
    }
    rep.add_check("bilinearity", dbil < 1e-12, dbil, 1e-12);

    // zero input
    auto zero = make_zero();
    auto vz = collision::qplus_points(*zero, *g, pts, kf, quad_exact, bc);
    double dz = 0.0;
    for (auto& v : vz) dz = std::max(dz, std::abs(v));
    rep.add_check("zero input gives zero", dz == 0.0, dz, 0.0);

    // Galilean covariance under a lattice shift
    Vec3 m{vg.h(), 0.0, 0.0};
    auto fm = make_translated(f, m);
    auto gm = make_translated(g, m);
    std::vector<Vec3> pts_shift;
    for (const auto& p : pts) pts_shift.push_back(p + m);
    auto v_cov = collision::qplus_points(*fm, *gm, pts, kf, quad_exact, bc);
    auto v_ref = collision::qplus_points(*f, *g, pts_shift, kf, quad_exact, bc);
    double dcov = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      dcov = std::max(dcov, std::abs(v_cov[i] - v_ref[i]));
    rep.add_check("Galilean covariance (lattice shift)", dcov < 1e-10, dcov, 1e-10);

    // scaling law on matched scaled grids
    double dscale = 0.0;
    for (double gam : {0.0, 0.5, 1.0}) {
      const double lam = 2.0;
      auto fl = make_dilated(f, lam);
      auto gl = make_dilated(g, lam);
      QuadConfig qs = quad_exact;
      qs.vstar_grid = VelocityGrid::make(vg.n, vg.half_width / lam);
      auto kk = KernelSpec::make(gam, Cutoff::Full);
      std::vector<Vec3> pts_l;
      for (const auto& p : pts) pts_l.push_back(p / lam);
      auto lhs = collision::qplus_points(*fl, *gl, pts_l, kk, qs, bc);
      std::vector<Vec3> pts_r = pts;
      auto rhs = collision::qplus_points(*f, *g, pts_r, kk, quad_exact, bc);
      for (std::size_t i = 0; i < pts.size(); ++i)
        dscale = std::max(dscale, rel_diff(lhs[i], std::pow(lam, -3.0 - gam) *
                                                       rhs[i]));
    }
    rep.add_check("scaling law", dscale < 1e-3, dscale, 1e-3);
    rep.timings_sec.emplace_back("point_identities", timer.lap());
  }

  // ---- loss term closed forms
  {
    auto k0 = KernelSpec::make(0.0, Cutoff::Full);
    double loss = collision::loss_eval(*f0, {1.2, -0.4, 0.7}, k0, quad, bc).real();
    double want = kPi * std::pow(2.0 * kPi, 1.5);
    rep.add_check("loss gamma=0 constant", rel_diff(loss, want) < 1e-5,
                  rel_diff(loss, want), 1e-5);

    // narrow point mass: loss -> pi |v|
    auto gn = make_gaussian({0, 0, 0}, 0.05, 1.0);
    double mass_n = mixture_l1(*gn);
    QuadConfig qn = quad;
    qn.vstar_grid = VelocityGrid::make(64, 1.0);
    auto k1 = KernelSpec::make(1.0, Cutoff::Full);
    Vec3 v{1.5, -0.7, 0.4};
    double lv = collision::loss_eval(*gn, v, k1, qn, bc).real() / mass_n;
    rep.add_check("loss point-mass limit pi|v|", rel_diff(lv, kPi * norm(v)) < 1e-2,
                  rel_diff(lv, kPi * norm(v)), 1e-2);
  }

  // ---- Radon closed forms and the 1D radial oracle
  {
    auto one = make_constant(1.0);
    auto sph = quad.sphere;
    double r1 = collision::radon_eval(*one, {0, 0, 1}, 1.0, collision::RadonVariant::T,
                                      sph, bc)
                    .real();
    rep.add_check("radon of 1 at |x|=1", std::fabs(r1 - kPi) < 1e-12,
                  std::fabs(r1 - kPi), 1e-12);
    double r2 = collision::radon_eval(*one, {0, 0, 2}, 1.0, collision::RadonVariant::T,
                                      sph, bc)
                    .real();
    double r2s = collision::radon_eval(*one, {0, 0, 2}, 1.0,
                                       collision::RadonVariant::TSmall, sph, bc)
                     .real();
    rep.add_check("radon of 1 at |x|=2 (and s-cut neutral)",
                  std::fabs(r2 - 2.0 * kPi) < 1e-12 && std::fabs(r2s - r2) < 1e-12,
                  std::fabs(r2 - 2.0 * kPi), 1e-12);

    // radial gaussian: reduce to 1D and integrate adaptively
    auto hrad = make_gaussian({0, 0, 0}, 1.1, 0.8);
    Vec3 x{0, 0, 2.5};
    double got = collision::radon_eval(*hrad, x, 1.0, collision::RadonVariant::T,
                                       sph, bc)
                     .real();
    // 2 pi |x|^g int_0^1 mu h(|x| sqrt(1-mu^2)) dmu via fine Simpson
    double acc = 0.0;
    const int n = 20001;
    for (int i = 0; i < n; ++i) {
      double mu = static_cast<double>(i) / (n - 1);
      double w = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      double arg = norm(x) * std::sqrt(1.0 - mu * mu);
      acc += w * mu * 0.8 * std::exp(-arg * arg / (2.0 * 1.1 * 1.1));
    }
    double want = 2.0 * kPi * norm(x) * acc / (3.0 * (n - 1));
    rep.add_check("radon radial 1D oracle", rel_diff(got, want) < 1e-8,
                  rel_diff(got, want), 1e-8);

    // conjugated transform: v_* = 0 slice equals the plain transform
    auto h = random_mixture(rng, false);
    Vec3 v{1.0, -0.5, 2.0};
    cplx a = collision::conjugated_radon(*h, v, {0, 0, 0}, 1.0,
                                         collision::RadonVariant::T, sph, bc);
    cplx b = collision::radon_eval(*h, v, 1.0, collision::RadonVariant::T, sph, bc);
    rep.add_check("conjugated transform at v_*=0", std::abs(a - b) < 1e-12,
                  std::abs(a - b), 1e-12);

    // translation covariance
    Vec3 m{0.3, 0.7, -0.2}, vs{0.4, 0.1, -0.9};
    auto hm = make_translated(h, -1.0 * m);
    cplx c1 = collision::conjugated_radon(*hm, v + m, vs + m, 1.0,
                                          collision::RadonVariant::T, sph, bc);
    cplx c2 = collision::conjugated_radon(*h, v, vs, 1.0,
                                          collision::RadonVariant::T, sph, bc);
    rep.add_check("conjugated transform translation covariance",
                  std::abs(c1 - c2) < 1e-12, std::abs(c1 - c2), 1e-12);

    // large-velocity transform: dead zone and closed form
    cplx z1 = collision::h_sbar_eval(*h, {0.5, 0, 0}, {-0.5, 0, 0}, 1.0, sph, bc);
    rep.add_check("h_sbar vanishes at |v-v_*|=1", std::abs(z1) == 0.0,
                  std::abs(z1), 0.0);
    cplx z2 = collision::h_sbar_eval(*one, {0, 0, 32}, {0, 0, 0}, 1.0, sph, bc);
    double want2 = 32.0 * kPi / std::sqrt(1025.0);
    rep.add_check("h_sbar closed form at |v|=32",
                  rel_diff(z2.real(), want2) < 1e-12, rel_diff(z2.real(), want2),
                  1e-12);
    rep.timings_sec.emplace_back("radon", timer.lap());
  }

  // ---- point-mass limit of the gain term against the Radon average
  {
    auto gn = make_gaussian({0, 0, 0}, 0.05, 1.0);
    double gmass = mixture_l1(*gn);
    QuadConfig qn = quad;
    qn.vstar_grid = VelocityGrid::make(64, 1.0);
    auto k0 = KernelSpec::make(0.0, Cutoff::Full);
    double worst = 0.0;
    for (int i = 0; i < 6; ++i) {
      Vec3 v = rng.box(2.5);
      if (norm(v) < 0.5) v = {1.0, 0.4, -0.8};
      cplx q = collision::qplus_points(*f0, *gn, std::span<const Vec3>(&v, 1), k0,
                                       qn, bc)[0];
      cplx r = gmass * collision::radon_eval(*f0, v, 0.0, collision::RadonVariant::T,
                                             quad.sphere, bc);
      worst = std::max(worst, rel_diff(q, r));
    }
    rep.add_check("gain point-mass limit matches Radon average", worst < 1e-2,
                  worst, 1e-2);
    rep.timings_sec.emplace_back("point_mass", timer.lap());
  }

  // ---- oracle agreement at random points
  {
    auto f = make_gaussian({0.5, -0.2, 0.1}, 0.9, 1.0);
    auto g = make_gaussian({-0.4, 0.3, -0.5}, 1.1, 0.8);
    double worst = 0.0;
    int inconclusive = 0;
    for (double gam : {0.0, 1.0}) {
      auto kk = KernelSpec::make(gam, Cutoff::Full);
      std::vector<Vec3> pts;
      for (int i = 0; i < 10; ++i) pts.push_back(rng.box(2.5));
      auto main_vals = collision::qplus_points(*f, *g, pts, kk, quad_exact, bc);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        auto orc = collision::qplus_oracle(*f, *g, pts[i], kk, bc);
        if (!orc.converged) ++inconclusive;
        double d = rel_diff(main_vals[i], orc.value);
        worst = std::max(worst, d);
        report::TrialRow row;
        row.trial = static_cast<int>(rep.trials.size());
        row.metrics = {{"gamma", gam},
                       {"oracle_rel_err", d},
                       {"oracle_order", orc.observed_order}};
        row.tags["kind"] = "oracle";
        rep.trials.push_back(row);
      }
    }
    rep.add_check("oracle agreement at 20 points", worst < cfg.tol_oracle, worst,
                  cfg.tol_oracle);
    rep.add_check("oracle ladders conclusive", inconclusive == 0, inconclusive, 0.0);
    rep.timings_sec.emplace_back("oracle", timer.lap());
  }

  rep.timings_sec.emplace_back("total_marker", 0.0);
  return rep;
}

// ---------------------------------------------------------------------------
// estimate suite
// ---------------------------------------------------------------------------

namespace {

struct TrialFns {
  AnalyticFnPtr f, g, h;
};

struct RatioSet {
  double hom{0.0}, inhom{0.0}, lr{0.0}, sbar_hom{0.0}, sbar_inhom{0.0};
  double lemma_t{0.0}, lemma_t_star{0.0}, lemma_ts{0.0}, lemma_h{0.0};
};

double lr_exponent(double gamma) { return 1.0 / (0.5 - gamma / 3.0); }

}  // namespace

EstimateReport estimate_suite(const Config& cfg, std::uint64_t seed, int n_trials,
                              const std::vector<std::pair<double, double>>& pq,
                              const std::vector<double>& gammas) {
  EstimateReport rep = new_report(cfg, "estimate", seed);
  rep.csv_columns = {"gamma", "p",        "q",       "ratio_hom",
                     "ratio_inhom", "ratio_LR", "refinement_delta"};
  Timer timer;
  BumpChain bc = make_chain(cfg);
  Rng rng(seed);

  for (const auto& [p, q] : pq)
    if (std::fabs(1.0 / p + 1.0 / q - 1.5) > 1e-12)
      throw std::invalid_argument("estimate_suite: exponents must satisfy 1/p+1/q=3/2");

  const VelocityGrid vg16 = VelocityGrid::make(cfg.out_n, cfg.grid_L);

  // trial functions (shared across all cells; h is grid-adapted mean-zero)
  std::vector<TrialFns> fns;
  for (int t = 0; t < n_trials; ++t) {
    TrialFns tf;
    tf.f = random_mixture(rng, true);
    tf.g = random_mixture(rng, true);
    tf.h = mean_zero_pair(rng, vg16);
    fns.push_back(tf);
  }

  struct CellAgg {
    double max_hom{0.0}, max_inhom{0.0}, max_lr{0.0};
    int arg_hom{-1};
  };
  std::map<std::pair<double, std::pair<double, double>>, CellAgg> cells;

  Rng anchor_rng(seed ^ 0x9e3779b97f4a7c15ull);
  bool all_finite = true;
  for (int t = 0; t < n_trials; ++t) {
    // ratios for every (gamma, pq) with one sweep per trial: compute with the
    // first pq, then rescale denominators for the others
    const VelocityGrid vg = vg16;
    QuadConfig quad = QuadConfig::make_default(vg, cfg.mu_nodes, cfg.phi_nodes,
                                               cfg.tail_cutoff);
    quad.threads = cfg.threads;
    auto triples = collision::qplus_grid_multi(*fns[t].f, *fns[t].g, vg, gammas,
                                               quad, bc);
    GridFunction fs = sample(*fns[t].f, vg), gs = sample(*fns[t].g, vg);
    GridFunction hs = sample(*fns[t].h, vg);

    for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
      const double gam = gammas[gi];
      const double num_hom =
          grid::norm(triples[gi].full, NormSpec::sobolev_hom(gam));
      const double num_inhom =
          grid::norm(triples[gi].full, NormSpec::sobolev_inhom(gam));
      const double num_lr =
          grid::norm(triples[gi].full, NormSpec::lebesgue(lr_exponent(gam)));
      const double num_sbar_hom =
          grid::norm(triples[gi].large, NormSpec::sobolev_hom(1.0));
      const double num_sbar_inhom =
          grid::norm(triples[gi].large, NormSpec::sobolev_inhom(1.0));

      // transform ratios are pq-independent; compute once per (trial, gamma)
      const double h_hom = grid::norm(hs, NormSpec::sobolev_hom(-gam));
      const double h_inhom = grid::norm(hs, NormSpec::sobolev_inhom(-gam));
      double lemma_t = 0.0, lemma_tstar = 0.0, lemma_ts = 0.0, lemma_h = 0.0;
      std::vector<Vec3> anchors{{0, 0, 0}, anchor_rng.box(2.0)};
      for (const Vec3& anchor : anchors) {
        GridFunction vals = GridFunction::zeros(vg);
        GridFunction vals_star = GridFunction::zeros(vg);
        GridFunction vals_ts = GridFunction::zeros(vg);
        GridFunction vals_h = GridFunction::zeros(vg);
        const int n = vg.n;
        parallel_for(
            vals.values.size(),
            [&](std::size_t idx) {
              int i = static_cast<int>(idx) / (n * n);
              int j = (static_cast<int>(idx) / n) % n;
              int k = static_cast<int>(idx) % n;
              Vec3 v = vg.node(i, j, k);
              vals.values[idx] = collision::conjugated_radon(
                  *fns[t].h, v, anchor, gam, collision::RadonVariant::T,
                  quad.sphere, bc);
              vals_star.values[idx] = collision::conjugated_radon(
                  *fns[t].h, anchor, v, gam, collision::RadonVariant::T,
                  quad.sphere, bc);
              vals_ts.values[idx] = collision::conjugated_radon(
                  *fns[t].h, v, anchor, gam, collision::RadonVariant::TSmall,
                  quad.sphere, bc);
              vals_h.values[idx] = collision::h_sbar_eval(*fns[t].h, v, anchor,
                                                          gam, quad.sphere, bc);
            },
            cfg.threads);
        lemma_t = std::max(lemma_t,
                           grid::norm(vals, NormSpec::lebesgue(2.0)) / h_hom);
        lemma_tstar = std::max(
            lemma_tstar, grid::norm(vals_star, NormSpec::lebesgue(2.0)) / h_hom);
        lemma_ts = std::max(lemma_ts,
                            grid::norm(vals_ts, NormSpec::lebesgue(2.0)) / h_inhom);
        lemma_h = std::max(lemma_h,
                           grid::norm(vals_h, NormSpec::lebesgue(2.0)) / h_inhom);
      }

      for (const auto& [p, q] : pq) {
        const double den = grid::norm(gs, NormSpec::lebesgue(p)) *
                           grid::norm(fs, NormSpec::lebesgue(q));
        const double den_w = grid::norm(gs, NormSpec::lebesgue(p, gam)) *
                             grid::norm(fs, NormSpec::lebesgue(q, gam));
        RatioSet rs;
        rs.hom = num_hom / den;
        rs.inhom = num_inhom / den_w;
        rs.lr = num_lr / den;
        rs.sbar_hom = num_sbar_hom / den;
        rs.sbar_inhom = num_sbar_inhom / den_w;
        rs.lemma_t = lemma_t;
        rs.lemma_t_star = lemma_tstar;
        rs.lemma_ts = lemma_ts;
        rs.lemma_h = lemma_h;

        for (double v : {rs.hom, rs.inhom, rs.lr, rs.sbar_hom, rs.sbar_inhom,
                         rs.lemma_t, rs.lemma_t_star, rs.lemma_ts, rs.lemma_h})
          if (!std::isfinite(v)) all_finite = false;

        report::TrialRow row;
        row.trial = t;
        row.metrics = {{"gamma", gam},
                       {"p", p},
                       {"q", q},
                       {"ratio_hom", rs.hom},
                       {"ratio_inhom", rs.inhom},
                       {"ratio_LR", rs.lr},
                       {"ratio_sbar_hom", rs.sbar_hom},
                       {"ratio_sbar_inhom", rs.sbar_inhom},
                       {"ratio_lemma_T", rs.lemma_t},
                       {"ratio_lemma_T_star", rs.lemma_t_star},
                       {"ratio_lemma_Ts", rs.lemma_ts},
                       {"ratio_lemma_H", rs.lemma_h}};
        rep.trials.push_back(row);

        auto& cell = cells[{gam, {p, q}}];
        if (rs.hom > cell.max_hom) {
          cell.max_hom = rs.hom;
          cell.arg_hom = t;
        }
        cell.max_inhom = std::max(cell.max_inhom, rs.inhom);
        cell.max_lr = std::max(cell.max_lr, rs.lr);
      }
    }
  }
  rep.add_check("all ratios finite", all_finite, all_finite ? 1.0 : 0.0, 1.0);
  rep.timings_sec.emplace_back("trials", timer.lap());

  // refinement deltas at the per-cell argmax trial (deduplicated sweeps);
  // the default out_n = 16 refines to 24
  {
    std::set<int> argmax_trials;
    for (const auto& [key, cell] : cells) argmax_trials.insert(cell.arg_hom);
    int refine_n = cfg.out_n * 3 / 2;
    if (refine_n % 2) ++refine_n;
    const VelocityGrid vg24 = VelocityGrid::make(refine_n, cfg.grid_L);
    double worst_delta = 0.0;
    for (int t : argmax_trials) {
      if (t < 0) continue;
      TrialFns refined = fns[t];
      refined.h = mean_zero_pair(rng, vg24);  // re-balanced on the fine grid
      QuadConfig quad24 = QuadConfig::make_default(vg24, cfg.mu_nodes,
                                                   cfg.phi_nodes, cfg.tail_cutoff);
      quad24.threads = cfg.threads;
      auto triples24 = collision::qplus_grid_multi(*refined.f, *refined.g, vg24,
                                                   gammas, quad24, bc);
      GridFunction fs24 = sample(*refined.f, vg24), gs24 = sample(*refined.g, vg24);
      for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
        const double gam = gammas[gi];
        double num24 = grid::norm(triples24[gi].full, NormSpec::sobolev_hom(gam));
        for (const auto& [p, q] : pq) {
          auto& cell = cells[{gam, {p, q}}];
          if (cell.arg_hom != t) continue;
          double den24 = grid::norm(gs24, NormSpec::lebesgue(p)) *
                         grid::norm(fs24, NormSpec::lebesgue(q));
          double ratio24 = num24 / den24;
          double delta = std::fabs(ratio24 - cell.max_hom) / cell.max_hom;
          worst_delta = std::max(worst_delta, delta);
          for (auto& row : rep.trials)
            if (row.trial == t && row.metrics.at("gamma") == gam &&
                row.metrics.at("p") == p && row.metrics.at("q") == q)
              row.metrics["refinement_delta"] = delta;
        }
      }
    }
    rep.add_check("max-ratio refinement stability (n 16 -> 24)",
                  worst_delta < cfg.tol_refine, worst_delta, cfg.tol_refine);
    rep.aggregates["worst_refinement_delta"] = worst_delta;
    rep.timings_sec.emplace_back("refinement", timer.lap());
  }

  // dilation invariance of ratio_hom on matched scaled grids
  // (one multi-gamma sweep per dilation factor)
  {
    auto f = make_gaussian({0, 0, 0}, 1.0, 1.0);
    auto g = make_gaussian({0.5, 0, -0.3}, 1.0, 1.0);
    const std::vector<double> lambdas{0.5, 1.0, 2.0, 4.0};
    // num[lam][gamma index], sharp likewise; den[lam][pq index]
    std::vector<std::vector<double>> num(lambdas.size()), sharp(lambdas.size());
    std::vector<std::vector<double>> den(lambdas.size());
    for (std::size_t li = 0; li < lambdas.size(); ++li) {
      const double lam = lambdas[li];
      auto fl = make_dilated(f, lam);
      auto gl = make_dilated(g, lam);
      const VelocityGrid vgl = VelocityGrid::make(cfg.out_n, cfg.grid_L / lam);
      QuadConfig quadl = QuadConfig::make_default(vgl, cfg.mu_nodes, cfg.phi_nodes,
                                                  cfg.tail_cutoff);
      quadl.threads = cfg.threads;
      auto tr = collision::qplus_grid_multi(*fl, *gl, vgl, gammas, quadl, bc);
      GridFunction fsl = sample(*fl, vgl), gsl = sample(*gl, vgl);
      for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
        num[li].push_back(grid::norm(tr[gi].full, NormSpec::sobolev_hom(gammas[gi])));
        sharp[li].push_back(
            grid::norm(tr[gi].full, NormSpec::sobolev_hom(gammas[gi] + 0.25)));
      }
      for (const auto& [p, q] : pq)
        den[li].push_back(grid::norm(gsl, NormSpec::lebesgue(p)) *
                          grid::norm(fsl, NormSpec::lebesgue(q)));
    }
    double worst_spread = 0.0, sharp_growth = 0.0;
    for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
      for (std::size_t pi = 0; pi < pq.size(); ++pi) {
        std::vector<double> ratios;
        for (std::size_t li = 0; li < lambdas.size(); ++li)
          ratios.push_back(num[li][gi] / den[li][pi]);
        double lo = *std::min_element(ratios.begin(), ratios.end());
        double hi = *std::max_element(ratios.begin(), ratios.end());
        worst_spread = std::max(worst_spread, (hi - lo) / lo);
        sharp_growth = std::max(sharp_growth, (sharp.back()[gi] / den.back()[pi]) /
                                                  (sharp.front()[gi] / den.front()[pi]));
      }
    }
    rep.add_check("ratio_hom dilation invariance", worst_spread < cfg.tol_dilation,
                  worst_spread, cfg.tol_dilation);
    // exploratory only: the super-critical order ratio must grow under dilation
    rep.aggregates["sharpness_growth_Hdot_gamma_plus_quarter"] = sharp_growth;
    rep.notes.push_back(
        "sharpness exploration: ratio in the Hdot^{gamma+1/4} norm grows by the "
        "factor above across lambda 0.5 -> 4; not an asserted check");
    rep.timings_sec.emplace_back("dilation", timer.lap());
  }

  return rep;
}

// ---------------------------------------------------------------------------
// schur suite
// ---------------------------------------------------------------------------

namespace {

struct RadialGrid {
  std::vector<double> r, w;  // radii and 4 pi r^2 dr weights
};

RadialGrid log_radial(double rmin, double rmax, int n) {
  RadialGrid g;
  const double du = std::log(rmax / rmin) / n;
  for (int i = 0; i < n; ++i) {
    double u = std::log(rmin) + (i + 0.5) * du;
    double r = std::exp(u);
    g.r.push_back(r);
    g.w.push_back(4.0 * kPi * r * r * r * du);  // r^2 dr = r^3 du
  }
  return g;
}

struct SchurResult {
  double omega{0.0}, beta{0.0}, sigma{0.0};
  bool converged{true};
};

SchurResult schur_check(const RadialGrid& gx, const RadialGrid& gxi,
                        const std::function<double(double, double)>& kernel,
                        const std::function<double(double)>& p,
                        const std::function<double(double)>& q) {
  const int nx = static_cast<int>(gx.r.size());
  const int nxi = static_cast<int>(gxi.r.size());
  std::vector<double> K(static_cast<std::size_t>(nx) * nxi);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < nxi; ++j)
      K[static_cast<std::size_t>(i) * nxi + j] = kernel(gx.r[i], gxi.r[j]);

  SchurResult res;
  for (int i = 0; i < nx; ++i) {
    double row = 0.0;
    for (int j = 0; j < nxi; ++j)
      row += K[static_cast<std::size_t>(i) * nxi + j] * q(gxi.r[j]) * gxi.w[j];
    res.omega = std::max(res.omega, row / p(gx.r[i]));
  }
  for (int j = 0; j < nxi; ++j) {
    double col = 0.0;
    for (int i = 0; i < nx; ++i)
      col += K[static_cast<std::size_t>(i) * nxi + j] * p(gx.r[i]) * gx.w[i];
    res.beta = std::max(res.beta, col / q(gxi.r[j]));
  }

  // largest singular value of A_ij = sqrt(wx_i) K_ij sqrt(wxi_j)
  std::vector<double> x(nxi, 1.0 / std::sqrt(static_cast<double>(nxi))), y(nx);
  double sigma = 0.0, prev = -1.0;
  for (int it = 0; it < 2000; ++it) {
    for (int i = 0; i < nx; ++i) {
      double acc = 0.0;
      for (int j = 0; j < nxi; ++j)
        acc += std::sqrt(gx.w[i]) * K[static_cast<std::size_t>(i) * nxi + j] *
               std::sqrt(gxi.w[j]) * x[j];
      y[i] = acc;
    }
    double ny = 0.0;
    for (double v : y) ny += v * v;
    ny = std::sqrt(ny);
    if (ny == 0.0) {
      sigma = 0.0;
      break;
    }
    for (int j = 0; j < nxi; ++j) {
      double acc = 0.0;
      for (int i = 0; i < nx; ++i)
        acc += std::sqrt(gx.w[i]) * K[static_cast<std::size_t>(i) * nxi + j] *
               std::sqrt(gxi.w[j]) * y[i] / ny;
      x[j] = acc;
    }
    double nx2 = 0.0;
    for (double v : x) nx2 += v * v;
    sigma = std::sqrt(nx2);
    for (double& v : x) v /= sigma;
    if (prev > 0.0 && std::fabs(sigma - prev) < 1e-13 * sigma) break;
    prev = sigma;
    if (it == 1999) res.converged = false;
  }
  res.sigma = sigma;
  return res;
}

}  // namespace

EstimateReport schur_suite(const Config& cfg) {
  EstimateReport rep = new_report(cfg, "schur", cfg.seed);
  Timer timer;

  auto run_case = [&](const std::string& name,
                      const std::function<double(double, double)>& kernel,
                      const std::function<double(double)>& p,
                      const std::function<double(double)>& q, double rmin,
                      double rmax) {
    RadialGrid g = log_radial(rmin, rmax, 220);
    SchurResult res = schur_check(g, g, kernel, p, q);
    double bound = std::sqrt(res.omega * res.beta);
    rep.add_check("schur " + name + " sigma <= sqrt(omega beta)",
                  res.converged && res.sigma <= bound * (1.0 + 1e-6), res.sigma,
                  bound);
    rep.aggregates["schur_" + name + "_sigma"] = res.sigma;
    rep.aggregates["schur_" + name + "_bound"] = bound;
  };

  run_case(
      "C1", [](double rx, double rxi) { return (rx * rxi < 512.0 && rx > 8.0) ? 1.0 : 0.0; },
      [](double r) { return 1.0 / (1.0 + r); }, [](double r) { return 1.0 / (r * r); },
      1e-3, 2e3);
  run_case(
      "C2", [](double rx, double rxi) { return (rx * rxi < 512.0 && rx < 16.0) ? 1.0 : 0.0; },
      [](double r) { return 1.0 / r; },
      [](double r) { return 1.0 / ((1.0 + r) * (1.0 + r)); }, 1e-3, 2e3);
  for (int z : {1, -1}) {
    double cap = 1024.0 * 4.0;  // |z| = 1
    run_case(
        "III_z" + std::string(z > 0 ? "+1" : "-1"),
        [cap](double rx, double rxi) {
          double prod = rx * rxi;
          return (prod > 64.0 && prod < cap && rx > 8.0 && rxi > 8.0)
                     ? 1.0 / std::sqrt(prod)
                     : 0.0;
        },
        [](double r) { return std::pow(r, -1.5); },
        [](double r) { return std::pow(r, -1.5); }, 4.0, 1e3);
  }

  // zero kernel degenerates cleanly
  {
    RadialGrid g = log_radial(1.0, 10.0, 40);
    SchurResult res = schur_check(
        g, g, [](double, double) { return 0.0; }, [](double) { return 1.0; },
        [](double) { return 1.0; });
    rep.add_check("schur zero kernel", res.sigma == 0.0 && res.omega == 0.0,
                  res.sigma, 0.0);
  }

  // row-sum inequalities with fitted constants for the zone-III kernel
  {
    RadialGrid g = log_radial(8.0, 512.0, 200);
    double fit = 0.0;
    std::vector<double> rowratio(g.r.size());
    for (std::size_t i = 0; i < g.r.size(); ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < g.r.size(); ++j) {
        double prod = g.r[i] * g.r[j];
        if (prod > 64.0 && prod < 4096.0)
          row += std::pow(prod, -0.5) * std::pow(g.r[j], -1.5) * g.w[j];
      }
      rowratio[i] = row / std::pow(g.r[i], -1.5);
      fit = std::max(fit, rowratio[i]);
    }
    bool ok = true;
    for (double v : rowratio)
      if (!(v <= fit * (1.0 + 1e-12))) ok = false;
    rep.add_check("zone-III row bound with fitted constant", ok, fit, fit);
    rep.aggregates["schur_III_row_constant"] = fit;
  }

  rep.timings_sec.emplace_back("total", timer.lap());
  return rep;
}

// ---------------------------------------------------------------------------
// region-III scan suite
// ---------------------------------------------------------------------------

EstimateReport region3_suite(const Config& cfg, std::uint64_t seed, int n) {
  EstimateReport rep = new_report(cfg, "region3", seed);
  Timer timer;
  BumpChain bc = make_chain(cfg);
  auto tables = symbol::region3_scan_multi(seed, n, {0.0, 1.0}, bc, cfg.node_mult);

  int trial = 0;
  for (std::size_t gi = 0; gi < tables.size(); ++gi) {
    for (const auto& row : tables[gi]) {
      report::TrialRow tr;
      tr.trial = trial++;
      tr.metrics = {{"gamma", gi == 0 ? 0.0 : 1.0},
                    {"lambda", row.lambda},
                    {"theta0", row.theta0},
                    {"abs_norm", row.abs_norm},
                    {"cone", static_cast<double>(row.cone)}};
      rep.trials.push_back(tr);
    }
  }

  double slope0 = symbol::scan_slope(tables[0]);
  double slope1 = symbol::scan_slope(tables[1]);
  rep.add_check("zone-III slope gamma=0 <= 0.1", slope0 <= 0.1, slope0, 0.1);
  // |a| = 2 pi Lambda^{gamma-1}|sin(Lambda/2)| exactly (theta0-independent),
  // so the gamma=1 normalized magnitude grows like Lambda^{1/2}; the stated
  // zone-III decay bound does not hold there. Reported, not gating.
  rep.add_check("zone-III slope gamma=1 <= 0.1 (known defect)", slope1 <= 0.1,
                slope1, 0.1,
                "exact |a| = 2 pi Lambda^{gamma-1} |sin(Lambda/2)| makes the "
                "normalized magnitude grow like Lambda^{1/2}",
                /*expected_defect=*/true);
  rep.aggregates["slope_gamma0"] = slope0;
  rep.aggregates["slope_gamma1"] = slope1;
  rep.timings_sec.emplace_back("total", timer.lap());
  return rep;
}

std::vector<EstimateReport> run_all(const Config& cfg) {
  std::vector<EstimateReport> out;
  out.push_back(partition_suite(cfg));
  out.push_back(geometry_suite(cfg, cfg.seed, 1000));
  out.push_back(stationary_decay_suite(cfg, {0.0, 1.0}, {kPi / 3.0, kPi / 2.0},
                                       {1e2, 1e3, 1e4}));
  out.push_back(identity_suite(cfg, cfg.seed, 10));
  out.push_back(estimate_suite(cfg, cfg.seed, cfg.trials,
                               {{1.0, 2.0}, {2.0, 1.0}, {4.0 / 3.0, 4.0 / 3.0}},
                               {0.0, 0.5, 1.0}));
  out.push_back(schur_suite(cfg));
  out.push_back(region3_suite(cfg, cfg.seed, 500));
  return out;
}

}  // namespace gainterm::verify
