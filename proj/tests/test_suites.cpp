#include <doctest.h>

#include <sstream>

#include "gainterm/report.hpp"
#include "gainterm/verify.hpp"

using namespace gainterm;

namespace {
Config small_config() {
  Config cfg = Config::defaults();
  cfg.out_n = 10;  // keep the unit suite cheap; acceptance runs full sizes
  cfg.trials = 2;
  cfg.tol_mass = 2e-3;  // coarse grid in the unit run
  return cfg;
}

std::string canonical_bytes(const report::EstimateReport& r) {
  std::ostringstream js, cs;
  report::write_json(js, r);
  report::write_csv(cs, r);
  return js.str() + cs.str();
}
}  // namespace

TEST_CASE("partition suite passes") {
  auto rep = verify::partition_suite(Config::defaults());
  for (const auto& c : rep.checks) {
    INFO(c.name, " value=", c.value);
    CHECK(c.passed);
  }
}

TEST_CASE("geometry suite passes at reduced size") {
  auto rep = verify::geometry_suite(Config::defaults(), 7, 100);
  for (const auto& c : rep.checks) {
    INFO(c.name, " value=", c.value);
    CHECK(c.passed);
  }
}

TEST_CASE("stationary suite on a reduced lattice") {
  auto rep = verify::stationary_decay_suite(Config::defaults(), {0.0, 1.0},
                                            {M_PI / 3.0}, {1e2, 1e3});
  for (const auto& c : rep.checks) {
    INFO(c.name, " value=", c.value);
    CHECK(c.passed);
  }
}

TEST_CASE("schur suite passes") {
  auto rep = verify::schur_suite(Config::defaults());
  for (const auto& c : rep.checks) {
    INFO(c.name, " value=", c.value);
    CHECK(c.passed);
  }
}

TEST_CASE("region3 suite small run reproduces the known defect split") {
  auto rep = verify::region3_suite(Config::defaults(), 11, 60);
  REQUIRE(rep.checks.size() >= 2);
  CHECK(rep.checks[0].passed);            // gamma = 0
  CHECK(rep.checks[1].expected_defect);   // gamma = 1 documented
  CHECK(rep.failed_count() == 0);
}

TEST_CASE("estimate suite small run is deterministic across thread counts") {
  Config cfg = small_config();
  cfg.threads = 1;
  auto r1 = verify::estimate_suite(cfg, 5, 2, {{2.0, 1.0}}, {0.0, 1.0});
  cfg.threads = 2;
  auto r2 = verify::estimate_suite(cfg, 5, 2, {{2.0, 1.0}}, {0.0, 1.0});
  CHECK(canonical_bytes(r1) == canonical_bytes(r2));
  for (const auto& c : r1.checks) {
    INFO(c.name, " value=", c.value);
    CHECK(c.passed);
  }
  CHECK(r1.trials.size() == 2 * 2);  // trials x gammas x pq
}
