#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace gainterm::report {

/// One asserted check with its measured value.
struct Check {
  std::string name;
  bool passed{false};
  double value{0.0};
  double threshold{0.0};
  std::string details;
  /// Documented spec/paper defect: reported, but not counted as a failure.
  bool expected_defect{false};
};

/// One trial row; metrics keep a deterministic (sorted) order.
struct TrialRow {
  int trial{0};
  std::map<std::string, double> metrics;
  std::map<std::string, std::string> tags;
};

/// Schema "ERv1". The canonical artifacts (JSON/CSV/MD) contain no wall-clock
/// data and are byte-identical for identical seed+config regardless of the
/// thread count; runtimes go to a separate timings sidecar.
struct EstimateReport {
  std::string suite;
  std::uint64_t seed{0};
  std::string config_hash;
  std::string config_text;  // canonical config echo
  std::vector<TrialRow> trials;
  std::vector<Check> checks;
  std::map<std::string, double> aggregates;
  std::vector<std::string> notes;
  std::vector<std::string> csv_columns;  // metric order for CSV; default sorted
  std::vector<std::pair<std::string, double>> timings_sec;

  bool all_passed() const;
  int failed_count() const;  // excludes expected defects
  void add_check(const std::string& name, bool passed, double value,
                 double threshold, const std::string& details = "",
                 bool expected_defect = false);
};

void write_json(std::ostream& os, const EstimateReport& r);
void write_csv(std::ostream& os, const EstimateReport& r);
void write_md(std::ostream& os, const EstimateReport& r);
void write_timings_csv(std::ostream& os, const EstimateReport& r);

enum class Format { Json, Csv, Md };

/// Writes <dir>/<suite>.<ext> (plus <suite>.timings.csv once per call set)
/// and returns the paths written.
std::vector<std::string> emit_report(const EstimateReport& r, const std::string& dir,
                                     const std::vector<Format>& formats,
                                     bool with_timings = true);

/// Reads back a JSON report (used by the `report` subcommand to re-emit).
EstimateReport read_json(std::istream& is);

}  // namespace gainterm::report
