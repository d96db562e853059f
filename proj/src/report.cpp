#include "gainterm/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace gainterm::report {

using ojson = nlohmann::ordered_json;

bool EstimateReport::all_passed() const { return failed_count() == 0; }

int EstimateReport::failed_count() const {
  int n = 0;
  for (const auto& c : checks)
    if (!c.passed && !c.expected_defect) ++n;
  return n;
}

void EstimateReport::add_check(const std::string& name, bool passed, double value,
                               double threshold, const std::string& details,
                               bool expected_defect) {
  checks.push_back({name, passed, value, threshold, details, expected_defect});
}

namespace {

ojson to_json(const EstimateReport& r) {
  ojson j;
  j["schema"] = "ERv1";
  j["suite"] = r.suite;
  j["seed"] = r.seed;
  j["config_hash"] = r.config_hash;
  j["config"] = r.config_text;
  ojson checks = ojson::array();
  for (const auto& c : r.checks) {
    ojson jc;
    jc["name"] = c.name;
    jc["passed"] = c.passed;
    jc["value"] = c.value;
    jc["threshold"] = c.threshold;
    if (!c.details.empty()) jc["details"] = c.details;
    if (c.expected_defect) jc["expected_defect"] = true;
    checks.push_back(jc);
  }
  j["checks"] = checks;
  ojson trials = ojson::array();
  for (const auto& t : r.trials) {
    ojson jt;
    jt["trial"] = t.trial;
    for (const auto& [k, v] : t.metrics) jt[k] = v;
    for (const auto& [k, v] : t.tags) jt[k] = v;
    trials.push_back(jt);
  }
  j["trials"] = trials;
  j["aggregates"] = ojson(std::map<std::string, double>(r.aggregates));
  j["notes"] = r.notes;
  return j;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

void write_json(std::ostream& os, const EstimateReport& r) {
  os << to_json(r).dump(2) << "\n";
}

void write_csv(std::ostream& os, const EstimateReport& r) {
  std::vector<std::string> cols = r.csv_columns;
  if (cols.empty()) {
    std::set<std::string> keys;
    for (const auto& t : r.trials)
      for (const auto& [k, _] : t.metrics) keys.insert(k);
    cols.assign(keys.begin(), keys.end());
  }
  os << "trial";
  for (const auto& c : cols) os << "," << c;
  os << "\n";
  for (const auto& t : r.trials) {
    os << t.trial;
    for (const auto& c : cols) {
      os << ",";
      auto it = t.metrics.find(c);
      if (it != t.metrics.end()) os << fmt(it->second);
      else {
        auto ts = t.tags.find(c);
        if (ts != t.tags.end()) os << ts->second;
      }
    }
    os << "\n";
  }
}

void write_md(std::ostream& os, const EstimateReport& r) {
  os << "# Suite: " << r.suite << "\n\n";
  os << "- seed: " << r.seed << "\n- config: `" << r.config_hash << "`\n";
  os << "- checks passed: " << (r.checks.size() - r.failed_count()) << "/"
     << r.checks.size() << "\n\n";
  if (!r.checks.empty()) {
    os << "| check | status | value | threshold |\n|---|---|---|---|\n";
    for (const auto& c : r.checks) {
      const char* status =
          c.passed ? "pass" : (c.expected_defect ? "expected-defect" : "FAIL");
      os << "| " << c.name << " | " << status << " | " << fmt(c.value) << " | "
         << fmt(c.threshold) << " |\n";
    }
    os << "\n";
  }
  if (!r.aggregates.empty()) {
    os << "| aggregate | value |\n|---|---|\n";
    for (const auto& [k, v] : r.aggregates) os << "| " << k << " | " << fmt(v) << " |\n";
    os << "\n";
  }
  for (const auto& n : r.notes) os << "- " << n << "\n";
}

void write_timings_csv(std::ostream& os, const EstimateReport& r) {
  os << "stage,seconds\n";
  for (const auto& [k, v] : r.timings_sec) os << k << "," << fmt(v) << "\n";
}

std::vector<std::string> emit_report(const EstimateReport& r, const std::string& dir,
                                     const std::vector<Format>& formats,
                                     bool with_timings) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::vector<std::string> written;
  auto put = [&](const std::string& ext, auto writer) {
    std::string path = (fs::path(dir) / (r.suite + "." + ext)).string();
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("emit_report: cannot write " + path);
    writer(os, r);
    written.push_back(path);
  };
  for (Format f : formats) {
    if (f == Format::Json) put("json", write_json);
    else if (f == Format::Csv) put("csv", write_csv);
    else put("md", write_md);
  }
  if (with_timings) put("timings.csv", write_timings_csv);
  return written;
}

EstimateReport read_json(std::istream& is) {
  ojson j = ojson::parse(is);
  if (!j.contains("schema") || j.at("schema").get<std::string>() != "ERv1")
    throw std::runtime_error("report: not an ERv1 document");
  EstimateReport r;
  r.suite = j.value("suite", "");
  r.seed = j.value("seed", std::uint64_t{0});
  r.config_hash = j.value("config_hash", "");
  r.config_text = j.value("config", "");
  for (const auto& jc : j.value("checks", ojson::array())) {
    Check c;
    c.name = jc.value("name", "");
    c.passed = jc.value("passed", false);
    c.value = jc.value("value", 0.0);
    c.threshold = jc.value("threshold", 0.0);
    c.details = jc.value("details", "");
    c.expected_defect = jc.value("expected_defect", false);
    r.checks.push_back(c);
  }
  for (const auto& jt : j.value("trials", ojson::array())) {
    TrialRow t;
    for (auto it = jt.begin(); it != jt.end(); ++it) {
      if (it.key() == "trial") t.trial = it.value().get<int>();
      else if (it.value().is_number()) t.metrics[it.key()] = it.value().get<double>();
      else if (it.value().is_string()) t.tags[it.key()] = it.value().get<std::string>();
    }
    r.trials.push_back(t);
  }
  if (j.contains("aggregates"))
    for (auto it = j["aggregates"].begin(); it != j["aggregates"].end(); ++it)
      r.aggregates[it.key()] = it.value().get<double>();
  if (j.contains("notes"))
    for (const auto& n : j["notes"]) r.notes.push_back(n.get<std::string>());
  return r;
}

}  // namespace gainterm::report
