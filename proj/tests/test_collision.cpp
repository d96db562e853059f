#include <doctest.h>

#include <cmath>

#include "gainterm/collision.hpp"
#include "gainterm/rng.hpp"

using namespace gainterm;
using namespace gainterm::collision;
using grid::VelocityGrid;

namespace {

const partitions::BumpChain bc;

// hides the mixture structure to force the generic evaluation path
class Opaque final : public AnalyticFn {
 public:
  explicit Opaque(AnalyticFnPtr inner) : inner_(std::move(inner)) {}
  std::complex<double> eval(const Vec3& v) const override { return inner_->eval(v); }
  bool flatten(std::vector<GaussComponent>&) const override { return false; }
  std::string str() const override { return inner_->str(); }

 private:
  AnalyticFnPtr inner_;
};

QuadConfig quad_n(int n, double L, double tail = 0.0) {
  auto q = QuadConfig::make_default(VelocityGrid::make(n, L), 16, 16, tail);
  return q;
}

double mixture_l1(const AnalyticFn& f) {
  std::vector<GaussComponent> comps;
  REQUIRE(f.flatten(comps));
  double acc = 0.0;
  for (const auto& c : comps)
    acc += c.amp.real() * std::pow(2.0 * M_PI, 1.5) * std::pow(c.width, 3);
  return acc;
}

}  // namespace

TEST_CASE("kernel and quadrature construction") {
  CHECK_THROWS_AS(KernelSpec::make(1.5), std::invalid_argument);
  CHECK_THROWS_AS(KernelSpec::make(-0.1), std::invalid_argument);
  auto q = quad_n(12, 8.0);
  CHECK(q.sphere.weight_sum() == doctest::Approx(2.0 * M_PI).epsilon(1e-10));
}

TEST_CASE("mass identity at unit-test resolution") {
  auto f = make_gaussian({0, 0, 0}, 1.0, 1.0);
  auto g = make_gaussian({0.4, -0.2, 0.3}, 0.8, 1.2);
  auto quad = quad_n(12, 8.0, 1e-18);
  auto out = qplus_eval(*f, *g, quad.vstar_grid, KernelSpec::make(0.0), quad, bc);
  std::complex<double> total{};
  for (auto& v : out.values) total += v;
  total *= std::pow(out.grid.h(), 3);
  double want = M_PI * mixture_l1(*f) * mixture_l1(*g);
  CHECK(total.real() == doctest::Approx(want).epsilon(2e-3));
  CHECK(std::abs(total.imag()) < 1e-12 * want);
}

TEST_CASE("fast mixture path agrees with the generic path") {
  auto mix = make_sum({make_gaussian({0.5, 0, -0.3}, 0.8, 1.0),
                       make_modulated(make_gaussian({-0.4, 0.2, 0}, 1.1, 0.6),
                                      {1.2, -0.7, 0.4})});
  auto g = make_gaussian({0, 0.3, 0}, 0.9, 1.0);
  Opaque mix_slow(mix), g_slow(g);

  auto quad = quad_n(10, 6.0);
  std::vector<Vec3> pts{{0.3, -0.2, 0.5}, {1.0, 1.0, -1.0}, {0, 0, 0}};
  auto kernel = KernelSpec::make(0.7);
  auto fast = qplus_points(*mix, *g, pts, kernel, quad, bc);
  auto slow = qplus_points(mix_slow, g_slow, pts, kernel, quad, bc);
  for (std::size_t i = 0; i < pts.size(); ++i)
    CHECK(std::abs(fast[i] - slow[i]) < 1e-12 * std::max(1.0, std::abs(slow[i])));
}

TEST_CASE("pair-skip changes grid values negligibly") {
  auto f = make_gaussian({0.5, 0, 0}, 0.7, 1.0);
  auto g = make_gaussian({-0.3, 0.2, 0}, 0.8, 1.0);
  auto exact = quad_n(10, 8.0, 0.0);
  auto skip = quad_n(10, 8.0, 1e-18);
  const double gam[1] = {1.0};
  auto a = qplus_grid_multi(*f, *g, exact.vstar_grid, gam, exact, bc);
  auto b = qplus_grid_multi(*f, *g, skip.vstar_grid, gam, skip, bc);
  double scale = 0.0, worst = 0.0;
  for (std::size_t i = 0; i < a[0].full.values.size(); ++i)
    scale = std::max(scale, std::abs(a[0].full.values[i]));
  for (std::size_t i = 0; i < a[0].full.values.size(); ++i)
    worst = std::max(worst, std::abs(a[0].full.values[i] - b[0].full.values[i]));
  CHECK(worst < 1e-9 * scale);
}

TEST_CASE("multi-gamma pass equals single-gamma passes and split is exact") {
  auto f = make_gaussian({0.2, -0.1, 0}, 0.8, 1.0);
  auto g = make_gaussian({0, 0.4, -0.2}, 0.9, 0.7);
  auto quad = quad_n(10, 6.0);
  const std::vector<double> gammas{0.0, 0.5, 1.0};
  auto multi = qplus_grid_multi(*f, *g, quad.vstar_grid, gammas, quad, bc);
  for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
    auto single = qplus_eval(*f, *g, quad.vstar_grid,
                             KernelSpec::make(gammas[gi]), quad, bc);
    double worst = 0.0, split = 0.0;
    for (std::size_t i = 0; i < single.values.size(); ++i) {
      worst = std::max(worst,
                       std::abs(single.values[i] - multi[gi].full.values[i]));
      split = std::max(split, std::abs(multi[gi].full.values[i] -
                                       multi[gi].small.values[i] -
                                       multi[gi].large.values[i]));
    }
    CHECK(worst == 0.0);
    CHECK(split < 1e-10);
  }
}

TEST_CASE("positivity and bilinearity at points") {
  auto f = make_gaussian({0.4, 0, -0.2}, 0.8, 1.0);
  auto f2 = make_gaussian({-0.6, 0.2, 0.5}, 0.9, 0.7);
  auto g = make_gaussian({-0.5, 0.3, 0}, 0.7, 0.9);
  auto quad = quad_n(10, 6.0);
  auto kernel = KernelSpec::make(0.5);
  Rng rng(3);
  std::vector<Vec3> pts;
  for (int i = 0; i < 8; ++i) pts.push_back(rng.box(2.0));

  auto vf = qplus_points(*f, *g, pts, kernel, quad, bc);
  auto vf2 = qplus_points(*f2, *g, pts, kernel, quad, bc);
  auto sum = make_sum({f, f2});
  auto vs = qplus_points(*sum, *g, pts, kernel, quad, bc);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(vf[i].real() > -1e-12);
    CHECK(std::abs(vs[i] - vf[i] - vf2[i]) < 1e-12);
  }
  CHECK_THROWS_AS(qplus_points(*f, *g, {}, kernel, quad, bc),
                  std::invalid_argument);
}

TEST_CASE("loss closed forms") {
  auto g = make_gaussian({0, 0, 0}, 1.0, 1.0);
  auto quad = quad_n(16, 8.0);
  double v0 = loss_eval(*g, {0.7, -0.2, 1.0}, KernelSpec::make(0.0), quad, bc).real();
  CHECK(v0 == doctest::Approx(M_PI * std::pow(2 * M_PI, 1.5)).epsilon(1e-5));
  double z = std::abs(loss_eval(*make_zero(), {1, 0, 0}, KernelSpec::make(1.0),
                                quad, bc));
  CHECK(z == 0.0);
}

TEST_CASE("radon values and conjugated transform") {
  auto one = make_constant(1.0);
  auto sph = quadrature::SphereQuadrature::make(16, 16);
  CHECK(radon_eval(*one, {0, 0, 1}, 1.0, RadonVariant::T, sph, bc).real() ==
        doctest::Approx(M_PI).epsilon(1e-12));
  CHECK(radon_eval(*one, {0, 0, 2}, 1.0, RadonVariant::T, sph, bc).real() ==
        doctest::Approx(2 * M_PI).epsilon(1e-12));
  CHECK(radon_eval(*one, {0, 0, 2}, 1.0, RadonVariant::TSmall, sph, bc).real() ==
        doctest::Approx(2 * M_PI).epsilon(1e-12));
  CHECK_THROWS_AS(radon_eval(*one, {0, 0, 0}, 1.0, RadonVariant::T, sph, bc),
                  std::domain_error);

  // conjugated transform: v_* = 0 slice and the degenerate diagonal
  auto h = make_gaussian({0.3, 0.2, -0.5}, 1.0, 1.0);
  Vec3 v{1.2, -0.4, 0.8};
  auto a = conjugated_radon(*h, v, {0, 0, 0}, 1.0, RadonVariant::T, sph, bc);
  auto b = radon_eval(*h, v, 1.0, RadonVariant::T, sph, bc);
  CHECK(std::abs(a - b) < 1e-13);

  bool degenerate = false;
  auto dz = conjugated_radon(*h, v, v, 1.0, RadonVariant::T, sph, bc, &degenerate);
  CHECK(degenerate);
  CHECK(std::abs(dz) == 0.0);
  auto d0 = conjugated_radon(*h, v, v, 0.0, RadonVariant::T, sph, bc, &degenerate);
  CHECK(degenerate);
  CHECK(std::abs(d0 - M_PI * h->eval(v)) < 1e-13);

  // |v-v_*| = 1 sits inside the small-velocity zone: large part vanishes
  CHECK(std::abs(h_sbar_eval(*h, {0.5, 0, 0}, {-0.5, 0, 0}, 1.0, sph, bc)) == 0.0);
  auto far = h_sbar_eval(*one, {0, 0, 32}, {0, 0, 0}, 1.0, sph, bc);
  CHECK(far.real() == doctest::Approx(32.0 * M_PI / std::sqrt(1025.0)).epsilon(1e-12));
}

TEST_CASE("weak form matches the grid pairing") {
  auto f = make_gaussian({0.3, 0, 0}, 0.8, 1.0);
  auto g = make_gaussian({0, -0.2, 0.4}, 0.9, 1.0);
  auto h = make_gaussian({-0.3, 0.1, 0}, 1.2, 0.8);
  auto quad = quad_n(10, 8.0, 1e-18);
  const std::vector<double> gammas{0.0, 1.0};
  auto triples = qplus_grid_multi(*f, *g, quad.vstar_grid, gammas, quad, bc);
  auto rhs = weak_form_rhs_multi(*f, *g, *h, gammas, Cutoff::Full, quad, bc);
  auto hs = grid::sample_on_grid(*h, quad.vstar_grid).gf;
  for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
    std::complex<double> lhs{};
    for (std::size_t i = 0; i < hs.values.size(); ++i)
      lhs += triples[gi].full.values[i] * hs.values[i];
    lhs *= std::pow(quad.vstar_grid.h(), 3);
    CHECK(std::abs(lhs - rhs[gi]) < 5e-3 * std::abs(rhs[gi]));
  }
}

TEST_CASE("oracle agreement at a point") {
  auto f = make_gaussian({0.5, -0.2, 0.1}, 0.9, 1.0);
  auto g = make_gaussian({-0.4, 0.3, -0.5}, 1.1, 0.8);
  auto quad = quad_n(16, 8.0);
  for (double gamma : {0.0, 1.0}) {
    auto kernel = KernelSpec::make(gamma);
    Vec3 v{0.8, 0.1, -0.6};
    auto main_val = qplus_points(*f, *g, std::span<const Vec3>(&v, 1), kernel,
                                 quad, bc)[0];
    auto orc = qplus_oracle(*f, *g, v, kernel, bc);
    CHECK(orc.converged);
    CHECK(std::abs(main_val - orc.value) < 1e-3 * std::abs(orc.value));
  }
  // zero inputs
  auto z = qplus_oracle(*make_zero(), *g, {0, 0, 0}, KernelSpec::make(1.0), bc);
  CHECK(std::abs(z.value) == 0.0);
}

TEST_CASE("galilean covariance under lattice shifts") {
  auto f = make_gaussian({0.4, 0, -0.2}, 0.7, 1.0);
  auto g = make_gaussian({-0.5, 0.3, 0}, 0.6, 0.9);
  auto quad = quad_n(12, 8.0);
  Vec3 m{quad.vstar_grid.h(), 0, 0};
  auto fm = make_translated(f, m);
  auto gm = make_translated(g, m);
  std::vector<Vec3> pts{{0.5, 0.5, 0.5}, {-1, 0, 1}};
  std::vector<Vec3> pts_shift{pts[0] + m, pts[1] + m};
  auto kernel = KernelSpec::make(1.0);
  auto lhs = qplus_points(*fm, *gm, pts, kernel, quad, bc);
  auto rhs = qplus_points(*f, *g, pts_shift, kernel, quad, bc);
  for (std::size_t i = 0; i < pts.size(); ++i)
    CHECK(std::abs(lhs[i] - rhs[i]) < 1e-10);
}
