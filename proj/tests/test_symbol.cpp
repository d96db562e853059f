#include <doctest.h>

#include <cmath>

#include "gainterm/symbol.hpp"

using namespace gainterm;
using namespace gainterm::symbol;
using cplx = std::complex<double>;

TEST_CASE("colinear closed form") {
  auto ev = symbol_direct_auto({0, 0, 1}, {0, 0, 1}, 1.0);
  cplx want = M_PI * (1.0 - std::exp(cplx{0, -1})) / cplx{0, 1};
  CHECK(std::abs(ev.value - want) < 1e-12);
  CHECK(ev.lambda == doctest::Approx(1.0));
  CHECK(ev.theta0 == doctest::Approx(0.0));
}

TEST_CASE("small-x limit recovers the angular mass pi") {
  auto ev = symbol_direct_auto({0, 0, 1e-8}, {0, 1, 0}, 0.0);
  CHECK(std::abs(ev.value - cplx{M_PI, 0.0}) < 1e-6);
}

TEST_CASE("two-point leading term matches quadrature (it is exact here)") {
  // perpendicular pair: a = 2 pi Lambda^{gamma-1} sin(Lambda/2) on the nose
  const double lam = 400.0;
  const double r = std::sqrt(lam);
  Vec3 x{0, 0, r}, xi{r, 0, 0};
  auto q = symbol_direct_auto(x, xi, 1.0);
  auto s = symbol_stationary(x, xi, 1.0);
  CHECK(std::abs(q.value - s.value) < 1e-8);
  CHECK(q.value.real() == doctest::Approx(2.0 * M_PI * std::sin(lam / 2.0)));
  CHECK(std::abs(q.value.imag()) < 1e-9);
  CHECK(s.est_error.has_value());

  // oblique pair
  const double th = 1.1;
  Vec3 xi2{r * std::sin(th), 0, r * std::cos(th)};
  auto q2 = symbol_direct_auto(x, xi2, 0.5);
  auto s2 = symbol_stationary(x, xi2, 0.5);
  CHECK(std::abs(q2.value - s2.value) < 1e-8 * std::abs(q2.value) + 1e-10);
}

TEST_CASE("stationary refusals") {
  CHECK_THROWS_AS(symbol_stationary({0, 0, 1}, {0, 0, 2}, 1.0), std::domain_error);
  // below the validity floor
  CHECK_THROWS_AS(symbol_stationary({0, 0, 1}, {1, 0, 0}, 1.0), std::domain_error);
  CHECK_THROWS_AS(symbol_compare({0, 0, 1}, {0, 0, 2}, 1.0), std::domain_error);
}

TEST_CASE("quadrature floor refusal names the required count") {
  auto quad = quadrature::SphereQuadrature::make(32, 32);
  try {
    symbol_direct({0, 0, 40}, {40, 0, 0}, 1.0, quad);
    FAIL("expected refusal");
  } catch (const std::invalid_argument& e) {
    std::string msg = e.what();
    CHECK(msg.find("need >=") != std::string::npos);
    CHECK(msg.find(std::to_string(node_floor(1600.0))) != std::string::npos);
  }
}

TEST_CASE("conjugate symmetry and scale pairing") {
  Vec3 x{0, 0, 11.0}, xi{17.0, 0, 9.0};
  auto a = symbol_direct_auto(x, xi, 1.0);
  auto b = symbol_direct_auto(x, -1.0 * xi, 1.0);
  CHECK(std::abs(b.value - std::conj(a.value)) < 1e-9);
  auto c = symbol_direct_auto(x * 3.0, xi / 3.0, 1.0);
  CHECK(std::abs(c.value - a.value) < 1e-10);
}

TEST_CASE("magnitude bound |a| <= pi Lambda^gamma") {
  for (double gamma : {0.0, 1.0}) {
    for (double lam : {5.0, 60.0, 300.0}) {
      double r = std::sqrt(lam);
      auto ev = symbol_direct_auto({0, 0, r}, {r * 0.6, 0, r * 0.8}, gamma);
      CHECK(std::abs(ev.value) <= M_PI * std::pow(lam, gamma) + 1e-9);
    }
  }
}

TEST_CASE("rel_err normalizer guards small quadrature values") {
  // Lambda chosen so sin(Lambda/2) ~ 0: |quad| collapses but the comparison
  // stays meaningful through the Lambda^{gamma-1} floor
  const double lam = 4.0 * M_PI * 16.0;  // sin(lam/2) = sin(32 pi) = 0
  const double r = std::sqrt(lam);
  auto cmp = symbol_compare({0, 0, r}, {r, 0, 0}, 1.0);
  CHECK(cmp.rel_err < 1e-6);
}

TEST_CASE("region3 scan basics") {
  partitions::BumpChain bc;
  auto one = region3_scan(7, 1, 1.0, bc);
  REQUIRE(one.size() == 1);
  CHECK(std::isfinite(one[0].abs_norm));
  CHECK(one[0].lambda > 64.0);

  auto multi = region3_scan_multi(21, 40, {0.0, 1.0}, bc);
  REQUIRE(multi.size() == 2);
  REQUIRE(multi[0].size() == 40);
  // per-sample values share the angular integral: a(1)/a(0) = Lambda
  for (std::size_t i = 0; i < 40; ++i) {
    CHECK(std::abs(multi[1][i].value - multi[0][i].value * multi[0][i].lambda) <
          1e-9 * std::abs(multi[1][i].value));
  }
  double s0 = scan_slope(multi[0]);
  double s1 = scan_slope(multi[1]);
  CHECK(s0 < 0.1);
  CHECK(s1 > 0.2);  // the gamma=1 normalized magnitude grows ~ Lambda^{1/2}

  // determinism
  auto again = region3_scan(21, 40, 0.0, bc);
  CHECK(again[17].lambda == multi[0][17].lambda);
  CHECK(again[17].value == multi[0][17].value);
}
