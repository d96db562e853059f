#include <doctest.h>

#include <cmath>

#include "gainterm/partitions.hpp"
#include "gainterm/rng.hpp"

using namespace gainterm;
using namespace gainterm::partitions;

TEST_CASE("radial partition pinned values") {
  for (Ramp ramp : {Ramp::Exp, Ramp::Quintic}) {
    BumpChain bc(ramp);
    CHECK(radial_partition(bc, RadialKind::SCut, 0, 2.0) == 1.0);
    CHECK(radial_partition(bc, RadialKind::SCut, 0, 20.0) == 0.0);
    CHECK(bc.s_cut(0.0) == 1.0);

    double s = 0.0;
    for (int k = -30; k <= 30; ++k) s += radial_partition(bc, RadialKind::Rho, k, 7.3);
    CHECK(std::fabs(s - 1.0) < 1e-12);

    // support in the open interval (4,16)
    CHECK(bc.rho(4.0) == 0.0);
    CHECK(bc.rho(16.0) == 0.0);
    CHECK(bc.rho(6.0) > 0.0);
    CHECK(bc.rho(12.0) > 0.0);

    CHECK_THROWS_AS(radial_partition(bc, RadialKind::Rho, 0, -1.0),
                    std::domain_error);
  }
}

TEST_CASE("radial telescoping and octave disjointness") {
  BumpChain bc;
  Rng rng(3);
  for (int t = 0; t < 500; ++t) {
    double r = rng.log_uniform(1e-3, 1e6);
    double s = 0.0;
    for (int k = -40; k <= 40; ++k) s += bc.rho_k(k, r);
    CHECK(std::fabs(s - 1.0) < 1e-10);
    for (int j = -10; j <= 10; ++j)
      for (int d = 2; d <= 3; ++d)
        CHECK(bc.rho_k(j, r) * bc.rho_k(j + d, r) == 0.0);
  }
  // s + sbar == 1, s monotone
  double prev = 2.0;
  for (int i = 0; i <= 2000; ++i) {
    double r = 20.0 * i / 2000.0;
    CHECK(bc.s_cut(r) + bc.s_bar(r) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(bc.s_cut(r) <= prev + 1e-15);
    prev = bc.s_cut(r);
  }
}

TEST_CASE("angular partition pinned values") {
  BumpChain bc;
  Vec3 x{0, 0, 1};
  // theta0 = pi/2: the central piece is 1, every cone zero
  Vec3 xi{1, 0, 0};
  CHECK(angular_partition(bc, 0, x, xi) == doctest::Approx(1.0));
  for (int z = 1; z <= 6; ++z) {
    CHECK(angular_partition(bc, z, x, xi) == 0.0);
    CHECK(angular_partition(bc, -z, x, xi) == 0.0);
  }

  // theta0 = pi/2^6 lands in the |z|=3..5 cone band
  double th = M_PI / 64.0;
  Vec3 xi2{std::sin(th), 0, std::cos(th)};
  double s = 0.0;
  for (int z : {3, 4, 5}) s += angular_partition(bc, z, x, xi2);
  CHECK(std::fabs(s - 1.0) < 1e-12);

  Rng rng(11);
  for (int t = 0; t < 100; ++t) {
    double a = rng.uniform(0.01, M_PI - 0.01);
    Vec3 xia{std::sin(a), 0, std::cos(a)};
    double total = 0.0;
    for (int z = -40; z <= 40; ++z) total += angular_partition(bc, z, x, xia);
    CHECK(std::fabs(total - 1.0) < 1e-10);
  }

  CHECK_THROWS_AS(angular_partition(bc, 0, Vec3{0, 0, 0}, xi), std::domain_error);
}

TEST_CASE("region classifier pinned labels") {
  BumpChain bc;
  auto l1 = region_classify(bc, {0, 0, 100}, {100, 0, 0});
  CHECK(l1.coarse == Coarse::A);
  REQUIRE(l1.cone.has_value());
  CHECK(*l1.cone == 0);
  CHECK(l1.zone == Zone::I);

  auto l2 = region_classify(bc, {0, 0, 100}, {0.01, 0, 0.0001});
  CHECK(l2.coarse == Coarse::C1);

  auto l3 = region_classify(bc, {0, 0, 1000}, {0.1, 0, 0});
  CHECK(l3.coarse == Coarse::B1);

  CHECK_THROWS_AS(region_classify(bc, {0, 0, 0}, {1, 0, 0}), std::domain_error);
}

TEST_CASE("coarse labels cover the punctured plane deterministically") {
  BumpChain bc;
  Rng rng(23);
  for (int t = 0; t < 2000; ++t) {
    Vec3 x = rng.unit_vector() * rng.log_uniform(1e-2, 1e3);
    Vec3 xi = rng.unit_vector() * rng.log_uniform(1e-2, 1e3);
    auto l = region_classify(bc, x, xi);
    auto l2 = region_classify(bc, x, xi);
    CHECK(l.coarse == l2.coarse);  // deterministic tie-break
    double nx = norm(x), nxi = norm(xi), prod = nx * nxi;
    switch (l.coarse) {
      case Coarse::A: CHECK(nx > 8.0); CHECK(nxi > 8.0); break;
      case Coarse::B1: CHECK(prod > 64.0); CHECK(nx > 8.0); CHECK(nxi < 16.0); break;
      case Coarse::B2: CHECK(prod > 64.0); CHECK(nx < 16.0); break;
      case Coarse::C1: CHECK(prod < 512.0); CHECK(nx > 8.0); break;
      case Coarse::C2: CHECK(prod < 512.0); CHECK(nx < 16.0); break;
    }
    if (l.coarse == Coarse::A && l.cone && *l.cone != 0)
      CHECK(l.zone != Zone::None);
  }
}
