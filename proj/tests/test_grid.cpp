#include <doctest.h>

#include <cmath>
#include <sstream>

#include "gainterm/grid.hpp"
#include "gainterm/rng.hpp"

using namespace gainterm;
using namespace gainterm::grid;

namespace {
const VelocityGrid g32 = VelocityGrid::make(32, 8.0);

GridFunction gaussian_on(const VelocityGrid& g) {
  return sample_on_grid(*make_gaussian({0, 0, 0}, 1.0, 1.0), g).gf;
}
}  // namespace

TEST_CASE("grid construction rules") {
  CHECK_THROWS_AS(VelocityGrid::make(6, 8.0), std::invalid_argument);
  CHECK_THROWS_AS(VelocityGrid::make(9, 8.0), std::invalid_argument);
  CHECK_THROWS_AS(VelocityGrid::make(16, -1.0), std::invalid_argument);
  auto g = VelocityGrid::make(24, 8.0);  // non-power-of-two refinement size
  CHECK(g.h() == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("sampling guard") {
  auto res = sample_on_grid(*make_gaussian({0, 0, 0}, 1.0, 1.0), g32);
  CHECK(res.boundary_max == doctest::Approx(std::exp(-49.0 / 2.0)).epsilon(1e-12));
  CHECK_FALSE(res.guard_violated);
  CHECK_THROWS_AS(sample_on_grid(*make_gaussian({0, 0, 0}, 4.0, 1.0), g32),
                  std::runtime_error);
  auto warn = sample_on_grid(*make_gaussian({0, 0, 0}, 4.0, 1.0), g32, 1e-10,
                             GuardPolicy::Warn);
  CHECK(warn.guard_violated);
}

TEST_CASE("dft pinned values") {
  // one-hot at a node: flat modulus h^3
  GridFunction onehot = GridFunction::zeros(g32);
  onehot.at(16, 16, 16) = 1.0;  // the origin node
  auto hat = dft(onehot, Direction::Forward);
  const double h3 = std::pow(g32.h(), 3);
  for (std::size_t i = 0; i < hat.values.size(); i += 997)
    CHECK(std::abs(hat.values[i]) == doctest::Approx(h3).epsilon(1e-12));

  // gaussian: fhat(0) = (2 pi)^{3/2}
  auto gf = gaussian_on(g32);
  auto ghat = dft(gf, Direction::Forward);
  CHECK(ghat.values[0].real() ==
        doctest::Approx(std::pow(2.0 * M_PI, 1.5)).epsilon(1e-6));

  // round trip
  auto back = dft(ghat, Direction::Inverse);
  double worst = 0.0;
  for (std::size_t i = 0; i < back.values.size(); ++i)
    worst = std::max(worst, std::abs(back.values[i] - gf.values[i]));
  CHECK(worst < 1e-12);

  // Parseval with the (2 pi)^-3 dual measure
  double lhs = 0.0;
  for (auto& v : gf.values) lhs += std::norm(v);
  lhs *= h3;
  double rhs = 0.0;
  for (auto& v : ghat.values) rhs += std::norm(v);
  rhs /= 8.0 * std::pow(g32.half_width, 3);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("dft on a non-power-of-two grid still inverts") {
  auto g24 = VelocityGrid::make(24, 8.0);
  auto gf = gaussian_on(g24);
  auto back = dft(dft(gf, Direction::Forward), Direction::Inverse);
  double worst = 0.0;
  for (std::size_t i = 0; i < back.values.size(); ++i)
    worst = std::max(worst, std::abs(back.values[i] - gf.values[i]));
  CHECK(worst < 1e-12);
}

TEST_CASE("apply_dpow") {
  auto gf = gaussian_on(g32);

  auto same = apply_dpow(gf, 0.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < gf.values.size(); ++i)
    worst = std::max(worst, std::abs(same.values[i] - gf.values[i]));
  CHECK(worst < 1e-12);

  // |xi|^2 acts as the (negative) Laplacian: (3 - |v|^2) e^{-|v|^2/2}
  auto lap = apply_dpow(gf, 2.0);
  worst = 0.0;
  for (int i = 0; i < g32.n; ++i)
    for (int j = 0; j < g32.n; ++j)
      for (int k = 0; k < g32.n; ++k) {
        Vec3 v = g32.node(i, j, k);
        double want = (3.0 - norm2(v)) * std::exp(-norm2(v) / 2.0);
        worst = std::max(worst, std::abs(lap.at(i, j, k) - want));
      }
  CHECK(worst < 1e-5);

  // negative order requires mean-zero input
  CHECK_THROWS_AS(apply_dpow(gf, -0.5), std::domain_error);

  // mean-zero difference: D^g then D^-g is the identity
  auto diff = sample_on_grid(
                  *make_sum({make_gaussian({0.3, 0, 0}, 1.0, 1.0),
                             make_gaussian({-0.3, 0, 0}, 1.0, -1.0)}),
                  g32)
                  .gf;
  auto round = apply_dpow(apply_dpow(diff, 0.7), -0.7);
  worst = 0.0;
  for (std::size_t i = 0; i < diff.values.size(); ++i)
    worst = std::max(worst, std::abs(round.values[i] - diff.values[i]));
  CHECK(worst < 1e-8);
}

TEST_CASE("norm pinned values") {
  auto gf = gaussian_on(g32);
  CHECK(norm(gf, NormSpec::lebesgue(1)) ==
        doctest::Approx(std::pow(2.0 * M_PI, 1.5)).epsilon(1e-6));
  CHECK(norm(gf, NormSpec::lebesgue(2)) ==
        doctest::Approx(std::pow(M_PI, 0.75)).epsilon(1e-6));
  CHECK(norm(gf, NormSpec::sobolev_hom(0.0)) ==
        doctest::Approx(norm(gf, NormSpec::lebesgue(2))).epsilon(1e-8));
  // interleaving H^a >= max(L2, Hdot^a) for a >= 0
  for (double a : {0.5, 1.0, 1.5}) {
    double h = norm(gf, NormSpec::sobolev_inhom(a));
    CHECK(h >= norm(gf, NormSpec::lebesgue(2)) - 1e-12);
    CHECK(h >= norm(gf, NormSpec::sobolev_hom(a)) - 1e-12);
  }
  CHECK(norm(gf, NormSpec::lebesgue(INFINITY)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(NormSpec::lebesgue(0.5), std::invalid_argument);
}

TEST_CASE("norms invariant under exact lattice translation") {
  // circular shift of the samples (exact lattice translation)
  auto gf = sample_on_grid(*make_gaussian({0.5, -0.25, 0}, 0.9, 1.0), g32).gf;
  GridFunction sh = GridFunction::zeros(g32);
  const int n = g32.n, si = 3, sj = 30, sk = 17;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        sh.at((i + si) % n, (j + sj) % n, (k + sk) % n) = gf.at(i, j, k);
  for (auto spec : {NormSpec::lebesgue(1), NormSpec::lebesgue(2),
                    NormSpec::sobolev_hom(0.7), NormSpec::sobolev_inhom(1.0)}) {
    double a = norm(gf, spec), b = norm(sh, spec);
    CHECK(std::fabs(a - b) < 1e-10 * a);
  }
}

TEST_CASE("dilation law for norms on matched grids") {
  // f_lambda(v) = f(lambda v) sampled on a grid scaled to keep the guard
  const double lam = 2.0;
  auto f = make_gaussian({0, 0, 0}, 1.0, 1.0);
  auto gf = gaussian_on(g32);
  auto gl = VelocityGrid::make(32, 8.0 / lam);
  auto fl = sample_on_grid(*make_dilated(f, lam), gl).gf;
  for (double p : {1.0, 2.0}) {
    double lhs = norm(fl, NormSpec::lebesgue(p));
    double rhs = std::pow(lam, -3.0 / p) * norm(gf, NormSpec::lebesgue(p));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-4));
  }
  for (double a : {0.5, 1.0}) {
    double lhs = norm(fl, NormSpec::sobolev_hom(a));
    double rhs = std::pow(lam, a - 1.5) * norm(gf, NormSpec::sobolev_hom(a));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-3));
  }
}

TEST_CASE("grid refinement stability of reported norms") {
  auto fine = VelocityGrid::make(64, 8.0);
  auto gf = gaussian_on(g32);
  auto gf2 = gaussian_on(fine);
  for (auto spec : {NormSpec::lebesgue(1), NormSpec::lebesgue(2),
                    NormSpec::sobolev_hom(1.0), NormSpec::sobolev_inhom(1.0)}) {
    double a = norm(gf, spec), b = norm(gf2, spec);
    CHECK(std::fabs(a - b) / b < 1e-4);
  }
}

TEST_CASE("GFv1 file format") {
  auto gf = gaussian_on(VelocityGrid::make(8, 8.0));
  std::stringstream ss;
  write_gridfunction(ss, gf);
  std::string text = ss.str();
  CHECK(text.substr(0, 7) == "GFv1 8 ");

  std::stringstream in(text);
  auto back = read_gridfunction(in);
  CHECK(back.grid.n == 8);
  double worst = 0.0;
  for (std::size_t i = 0; i < gf.values.size(); ++i)
    worst = std::max(worst, std::abs(back.values[i] - gf.values[i]));
  CHECK(worst == 0.0);

  // mismatched counts rejected
  std::string short_text = text.substr(0, text.size() / 2);
  std::stringstream bad(short_text);
  CHECK_THROWS_AS(read_gridfunction(bad), std::runtime_error);
  std::stringstream extra(text + "0 0\n");
  CHECK_THROWS_AS(read_gridfunction(extra), std::runtime_error);
}
