#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json_fwd.hpp>

namespace gainterm {

/// Harness configuration. File format: JSON with the nested sections
/// grid / collision / symbol / partitions / verify / tolerances plus the
/// top-level key "threads". Environment variables win over the file and the
/// file over defaults; GAINTERM_<SECTION>_<KEY> maps to section.key
/// (e.g. GAINTERM_GRID_N -> grid.n, GAINTERM_THREADS -> threads).
/// Unknown keys are rejected with their full path.
struct Config {
  // grid
  int grid_n{32};
  double grid_L{8.0};
  // collision
  int out_n{16};
  int mu_nodes{16};
  int phi_nodes{16};
  double tail_cutoff{1e-18};
  // symbol
  double node_mult{0.75};
  double lambda_min{10.0};
  // partitions
  std::string ramp{"exp"};
  // verify
  std::uint64_t seed{424242};
  int trials{50};
  std::string out_dir{"reports"};
  // tolerances
  double tol_partition{1e-10};
  double tol_mass{1e-4};
  double tol_weak{1e-3};
  double tol_oracle{1e-3};
  double tol_dilation{0.05};
  double tol_refine{0.10};
  // top-level
  int threads{0};

  static Config defaults() { return {}; }

  /// Load from a JSON file (path may be empty: defaults only), then apply
  /// environment overrides, then validate.
  static Config load(const std::string& path, bool apply_env = true);

  /// Parse from JSON text (used by load and the round-trip tests).
  static Config from_json_text(const std::string& text, bool apply_env = false);

  nlohmann::ordered_json to_json() const;
  std::string canonical_text() const;  // round-trips through from_json_text
  std::string hash() const;            // FNV-1a 64 of the canonical text

  void validate() const;
};

}  // namespace gainterm
