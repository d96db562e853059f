#include "gainterm/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "gainterm/parallel.hpp"
#include "gainterm/rng.hpp"

namespace gainterm::symbol {

using cplx = std::complex<double>;

int node_floor(double lambda, double mult) {
  return std::max(64, static_cast<int>(std::ceil(mult * lambda)) + 48);
}

namespace {

struct Angles {
  double lambda, c0, s0, theta0;
};

Angles pair_geometry(const Vec3& x, const Vec3& xi) {
  double nx = norm(x), nxi = norm(xi);
  if (nx == 0.0 || nxi == 0.0)
    throw std::domain_error("symbol: zero input");
  double c0 = std::clamp(dot(x, xi) / (nx * nxi), -1.0, 1.0);
  return {nx * nxi, c0, std::sqrt(std::max(0.0, 1.0 - c0 * c0)), std::acos(c0)};
}

// gamma-free angular integral int e^{-i Lambda sigma} mu dmu dphi
cplx angular_integral(const Angles& a, const quadrature::SphereQuadrature& q) {
  const int nphi = q.nphi;
  std::vector<double> cph(nphi);
  for (int j = 0; j < nphi; ++j) cph[j] = std::cos(2.0 * M_PI * j / nphi);
  std::vector<cplx> rows(q.mu.size());
  std::vector<double> arg(nphi);
  for (std::size_t i = 0; i < q.mu.size(); ++i) {
    const double m = q.mu[i];
    const double radial = -a.lambda * m * m * a.c0;
    const double swing = -a.lambda * m * a.s0 * std::sqrt(1.0 - m * m);
    for (int j = 0; j < nphi; ++j) arg[j] = radial + swing * cph[j];
    double re = 0.0, im = 0.0;
    for (int j = 0; j < nphi; ++j) {
      re += std::cos(arg[j]);
      im += std::sin(arg[j]);
    }
    rows[i] = q.wmu[i] * m * cplx{re, im};
  }
  return pairwise_sum(std::span<const cplx>(rows)) * q.wphi();
}

}  // namespace

SymbolEval symbol_direct(const Vec3& x, const Vec3& xi, double gamma,
                         const quadrature::SphereQuadrature& quad, double mult) {
  Angles a = pair_geometry(x, xi);
  const int need = node_floor(a.lambda, mult);
  if (static_cast<int>(quad.mu.size()) < need || quad.nphi < need)
    throw std::invalid_argument(
        "symbol_direct: quadrature below the floor for lambda = " +
        std::to_string(a.lambda) + "; need >= " + std::to_string(need) +
        " nodes per axis");
  SymbolEval ev;
  ev.method = SymbolEval::Method::Quadrature;
  ev.lambda = a.lambda;
  ev.theta0 = a.theta0;
  ev.value = std::pow(a.lambda, gamma) * angular_integral(a, quad);
  return ev;
}

SymbolEval symbol_direct_auto(const Vec3& x, const Vec3& xi, double gamma,
                              double mult) {
  Angles a = pair_geometry(x, xi);
  const int need = node_floor(a.lambda, mult);
  auto quad = quadrature::SphereQuadrature::make(need, need);
  return symbol_direct(x, xi, gamma, quad, mult);
}

SymbolEval symbol_stationary(const Vec3& x, const Vec3& xi, double gamma,
                             double lambda_min) {
  Angles a = pair_geometry(x, xi);
  const double margin = std::min(a.theta0, M_PI - a.theta0);
  if (margin < 1e-8)
    throw std::domain_error("symbol_stationary: colinear input");
  const double half = 0.5 * a.theta0;
  const double cs2 = std::pow(std::cos(half) * std::sin(half), 2);
  if (a.lambda * cs2 < lambda_min)
    throw std::domain_error(
        "symbol_stationary: below validity floor (lambda cos^2 sin^2 = " +
        std::to_string(a.lambda * cs2) + " < " + std::to_string(lambda_min) + ")");

  const double sp = 0.5 * (a.c0 + 1.0), sm = 0.5 * (a.c0 - 1.0);
  const double amp = M_PI * std::pow(a.lambda, gamma - 1.0);
  SymbolEval ev;
  ev.method = SymbolEval::Method::Stationary;
  ev.lambda = a.lambda;
  ev.theta0 = a.theta0;
  ev.value = cplx{0.0, amp} * (std::polar(1.0, -a.lambda * sp) -
                               std::polar(1.0, -a.lambda * sm));
  ev.est_error = std::pow(a.lambda, gamma - 1.0) / (a.lambda * cs2);
  return ev;
}

SymbolComparison symbol_compare(const Vec3& x, const Vec3& xi, double gamma,
                                double mult, double lambda_min) {
  SymbolComparison cmp;
  cmp.stat = symbol_stationary(x, xi, gamma, lambda_min);
  cmp.quad = symbol_direct_auto(x, xi, gamma, mult);
  const double normalizer =
      std::max(std::abs(cmp.quad.value), std::pow(cmp.quad.lambda, gamma - 1.0));
  cmp.rel_err = std::abs(cmp.quad.value - cmp.stat.value) / normalizer;
  return cmp;
}

std::vector<std::vector<Region3Row>> region3_scan_multi(
    std::uint64_t seed, int n, const std::vector<double>& gammas,
    const partitions::BumpChain& bc, double mult) {
  if (n < 1) throw std::invalid_argument("region3_scan: n >= 1 required");
  Rng rng(seed);
  std::vector<std::vector<Region3Row>> out(gammas.size());
  for (auto& v : out) v.reserve(n);

  struct Sample {
    double lambda, theta0;
    int cone;
  };
  std::vector<Sample> samples;
  samples.reserve(n);
  int guard = 0;
  while (static_cast<int>(samples.size()) < n && guard < 200 * n) {
    ++guard;
    int z = static_cast<int>(rng.integer(1, 3));
    if (rng.uniform() < 0.5) z = -z;
    const int az = std::abs(z);
    const double lo = M_PI / std::ldexp(1.0, az + 3);
    const double hi = M_PI / std::ldexp(1.0, az + 1);
    double th = lo + (hi - lo) * rng.uniform(0.2, 0.8);
    if (z < 0) th = M_PI - th;
    const double lmax = 64.0 * std::ldexp(1.0, 2 * az);
    double lam = rng.log_uniform(64.0 * 1.1, lmax * 0.9);
    // radii with both factors > 8 (coarse A)
    double rx = rng.log_uniform(8.0 * 1.05, lam / (8.0 * 1.05));
    double rxi = lam / rx;
    Vec3 x{0.0, 0.0, rx};
    Vec3 xi{rxi * std::sin(th), 0.0, rxi * std::cos(th)};
    auto label = partitions::region_classify(bc, x, xi);
    if (label.coarse != partitions::Coarse::A || !label.cone ||
        *label.cone != z || label.zone != partitions::Zone::III)
      continue;
    samples.push_back({lam, th, z});
  }
  if (static_cast<int>(samples.size()) < n)
    throw std::runtime_error("region3_scan: sampler failed to reach target count");

  std::vector<cplx> integrals(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    const auto& s = samples[i];
    Angles a{s.lambda, std::cos(s.theta0),
             std::sqrt(std::max(0.0, 1.0 - std::pow(std::cos(s.theta0), 2))),
             s.theta0};
    const int need = node_floor(s.lambda, mult);
    auto quad = quadrature::SphereQuadrature::make(need, need);
    integrals[i] = angular_integral(a, quad);
  });

  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
      Region3Row row;
      row.lambda = samples[i].lambda;
      row.theta0 = samples[i].theta0;
      row.cone = samples[i].cone;
      row.value = std::pow(samples[i].lambda, gammas[gi]) * integrals[i];
      row.abs_norm = std::abs(row.value) * std::sqrt(samples[i].lambda);
      out[gi].push_back(row);
    }
  }
  return out;
}

std::vector<Region3Row> region3_scan(std::uint64_t seed, int n, double gamma,
                                     const partitions::BumpChain& bc, double mult) {
  return region3_scan_multi(seed, n, {gamma}, bc, mult)[0];
}

double scan_slope(const std::vector<Region3Row>& rows) {
  if (rows.size() < 2) throw std::invalid_argument("scan_slope: need >= 2 rows");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(rows.size());
  for (const auto& r : rows) {
    double lx = std::log(r.lambda), ly = std::log(std::max(r.abs_norm, 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void write_scan_csv(std::ostream& os, const std::vector<Region3Row>& rows) {
  os << "lambda,theta0,re_a,im_a,abs_norm,method\n";
  char buf[200];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,quadrature\n",
                  r.lambda, r.theta0, r.value.real(), r.value.imag(), r.abs_norm);
    os << buf;
  }
}

}  // namespace gainterm::symbol
