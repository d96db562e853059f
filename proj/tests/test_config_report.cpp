#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gainterm/config.hpp"
#include "gainterm/report.hpp"

using namespace gainterm;

TEST_CASE("config defaults and round trip") {
  Config c = Config::defaults();
  c.validate();
  Config back = Config::from_json_text(c.canonical_text());
  CHECK(back.canonical_text() == c.canonical_text());
  CHECK(back.hash() == c.hash());
  // empty text means all defaults
  Config empty = Config::from_json_text("");
  CHECK(empty.canonical_text() == c.canonical_text());
}

TEST_CASE("config env overrides beat file values") {
  setenv("GAINTERM_GRID_N", "32", 1);
  Config c = Config::from_json_text(R"({"grid": {"n": 16}})", true);
  CHECK(c.grid_n == 32);
  unsetenv("GAINTERM_GRID_N");
  Config c2 = Config::from_json_text(R"({"grid": {"n": 16}})", true);
  CHECK(c2.grid_n == 16);
}

TEST_CASE("config rejections name the key") {
  CHECK_THROWS_WITH_AS(Config::from_json_text(R"({"grid": {"n": 20}})"),
                       doctest::Contains("grid.n"), std::runtime_error);
  CHECK_THROWS_WITH_AS(Config::from_json_text(R"({"grid": {"m": 16}})"),
                       doctest::Contains("grid.m"), std::runtime_error);
  CHECK_THROWS_WITH_AS(Config::from_json_text(R"({"bogus": 1})"),
                       doctest::Contains("bogus"), std::runtime_error);
  CHECK_THROWS_AS(Config::from_json_text("{not json"), std::exception);
  CHECK_THROWS_WITH_AS(
      Config::from_json_text(R"({"partitions": {"ramp": "linear"}})"),
      doctest::Contains("partitions.ramp"), std::runtime_error);
}

namespace {
report::EstimateReport sample_report() {
  report::EstimateReport r;
  r.suite = "demo";
  r.seed = 42;
  r.config_hash = "deadbeef";
  r.config_text = "{}";
  r.add_check("alpha", true, 0.5, 1.0);
  r.add_check("beta", false, 2.0, 1.0, "demo failure");
  r.add_check("gamma-defect", false, 2.0, 1.0, "known", true);
  report::TrialRow t;
  t.trial = 0;
  t.metrics = {{"gamma", 1.0}, {"p", 2.0}, {"q", 1.0}, {"ratio_hom", 3.5}};
  r.trials.push_back(t);
  r.aggregates["max_ratio"] = 3.5;
  r.notes.push_back("a note");
  r.timings_sec.emplace_back("stage", 1.25);
  return r;
}
}  // namespace

TEST_CASE("report serialization is deterministic and timings stay out") {
  auto r = sample_report();
  std::ostringstream a, b;
  report::write_json(a, r);
  report::write_json(b, r);
  CHECK(a.str() == b.str());
  CHECK(a.str().find("1.25") == std::string::npos);
  CHECK(a.str().find("ERv1") != std::string::npos);

  std::ostringstream csv;
  report::write_csv(csv, r);
  CHECK(csv.str().find("trial,") == 0);
  CHECK(csv.str().find("ratio_hom") != std::string::npos);

  std::ostringstream md;
  report::write_md(md, r);
  CHECK(md.str().find("expected-defect") != std::string::npos);

  CHECK(r.failed_count() == 1);  // the expected defect does not count
  CHECK_FALSE(r.all_passed());
}

TEST_CASE("report json round trip") {
  auto r = sample_report();
  std::ostringstream os;
  report::write_json(os, r);
  std::istringstream is(os.str());
  auto back = report::read_json(is);
  CHECK(back.suite == r.suite);
  CHECK(back.seed == r.seed);
  CHECK(back.checks.size() == r.checks.size());
  CHECK(back.checks[2].expected_defect);
  CHECK(back.trials.size() == 1);
  CHECK(back.trials[0].metrics.at("ratio_hom") == 3.5);
  CHECK(back.aggregates.at("max_ratio") == 3.5);

  std::ostringstream os2;
  report::write_json(os2, back);
  CHECK(os2.str() == os.str());
}

TEST_CASE("estimate csv column schema") {
  auto r = sample_report();
  r.csv_columns = {"gamma", "p", "q", "ratio_hom", "ratio_inhom", "ratio_LR",
                   "refinement_delta"};
  std::ostringstream csv;
  report::write_csv(csv, r);
  std::string head = csv.str().substr(0, csv.str().find('\n'));
  CHECK(head == "trial,gamma,p,q,ratio_hom,ratio_inhom,ratio_LR,refinement_delta");
}
