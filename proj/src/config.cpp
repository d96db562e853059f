#include "gainterm/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace gainterm {

using ojson = nlohmann::ordered_json;

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

[[noreturn]] void bad(const std::string& path, const std::string& why) {
  throw std::runtime_error("config: key '" + path + "': " + why);
}

template <typename T>
void take(const ojson& j, const std::string& section, const std::string& key,
          T& slot) {
  if (!j.contains(key)) return;
  try {
    slot = j.at(key).get<T>();
  } catch (const std::exception&) {
    bad(section + "." + key, "invalid value '" + j.at(key).dump() + "'");
  }
}

void reject_unknown(const ojson& j, const std::string& section,
                    std::initializer_list<const char*> known) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known)
      if (it.key() == k) ok = true;
    if (!ok) bad(section.empty() ? it.key() : section + "." + it.key(),
                 "unknown key");
  }
}

void apply_json(Config& c, const ojson& j) {
  reject_unknown(j, "", {"grid", "collision", "symbol", "partitions", "verify",
                         "tolerances", "threads"});
  if (j.contains("grid")) {
    const auto& s = j.at("grid");
    reject_unknown(s, "grid", {"n", "L"});
    take(s, "grid", "n", c.grid_n);
    take(s, "grid", "L", c.grid_L);
  }
  if (j.contains("collision")) {
    const auto& s = j.at("collision");
    reject_unknown(s, "collision", {"out_n", "mu_nodes", "phi_nodes", "tail_cutoff"});
    take(s, "collision", "out_n", c.out_n);
    take(s, "collision", "mu_nodes", c.mu_nodes);
    take(s, "collision", "phi_nodes", c.phi_nodes);
    take(s, "collision", "tail_cutoff", c.tail_cutoff);
  }
  if (j.contains("symbol")) {
    const auto& s = j.at("symbol");
    reject_unknown(s, "symbol", {"node_mult", "lambda_min"});
    take(s, "symbol", "node_mult", c.node_mult);
    take(s, "symbol", "lambda_min", c.lambda_min);
  }
  if (j.contains("partitions")) {
    const auto& s = j.at("partitions");
    reject_unknown(s, "partitions", {"ramp"});
    take(s, "partitions", "ramp", c.ramp);
  }
  if (j.contains("verify")) {
    const auto& s = j.at("verify");
    reject_unknown(s, "verify", {"seed", "trials", "out_dir"});
    take(s, "verify", "seed", c.seed);
    take(s, "verify", "trials", c.trials);
    take(s, "verify", "out_dir", c.out_dir);
  }
  if (j.contains("tolerances")) {
    const auto& s = j.at("tolerances");
    reject_unknown(s, "tolerances",
                   {"partition", "mass", "weak", "oracle", "dilation", "refine"});
    take(s, "tolerances", "partition", c.tol_partition);
    take(s, "tolerances", "mass", c.tol_mass);
    take(s, "tolerances", "weak", c.tol_weak);
    take(s, "tolerances", "oracle", c.tol_oracle);
    take(s, "tolerances", "dilation", c.tol_dilation);
    take(s, "tolerances", "refine", c.tol_refine);
  }
  take(j, "", "threads", c.threads);
}

void apply_env(Config& c) {
  auto env_num = [](const char* name, auto& slot) {
    if (const char* v = std::getenv(name)) {
      std::istringstream is(v);
      if (!(is >> slot))
        throw std::runtime_error(std::string("config: env ") + name +
                                 ": invalid value '" + v + "'");
    }
  };
  auto env_str = [](const char* name, std::string& slot) {
    if (const char* v = std::getenv(name)) slot = v;
  };
  env_num("GAINTERM_GRID_N", c.grid_n);
  env_num("GAINTERM_GRID_L", c.grid_L);
  env_num("GAINTERM_COLLISION_OUT_N", c.out_n);
  env_num("GAINTERM_COLLISION_MU_NODES", c.mu_nodes);
  env_num("GAINTERM_COLLISION_PHI_NODES", c.phi_nodes);
  env_num("GAINTERM_COLLISION_TAIL_CUTOFF", c.tail_cutoff);
  env_num("GAINTERM_SYMBOL_NODE_MULT", c.node_mult);
  env_num("GAINTERM_SYMBOL_LAMBDA_MIN", c.lambda_min);
  env_str("GAINTERM_PARTITIONS_RAMP", c.ramp);
  env_num("GAINTERM_VERIFY_SEED", c.seed);
  env_num("GAINTERM_VERIFY_TRIALS", c.trials);
  env_str("GAINTERM_VERIFY_OUT_DIR", c.out_dir);
  env_num("GAINTERM_TOLERANCES_PARTITION", c.tol_partition);
  env_num("GAINTERM_TOLERANCES_MASS", c.tol_mass);
  env_num("GAINTERM_TOLERANCES_WEAK", c.tol_weak);
  env_num("GAINTERM_TOLERANCES_ORACLE", c.tol_oracle);
  env_num("GAINTERM_TOLERANCES_DILATION", c.tol_dilation);
  env_num("GAINTERM_TOLERANCES_REFINE", c.tol_refine);
  env_num("GAINTERM_THREADS", c.threads);
}

}  // namespace

Config Config::load(const std::string& path, bool env) {
  Config c;
  if (!path.empty()) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("config: cannot open '" + path + "'");
    std::stringstream buf;
    buf << is.rdbuf();
    std::string text = buf.str();
    if (text.find_first_not_of(" \t\r\n") != std::string::npos) {
      ojson j;
      try {
        j = ojson::parse(text);
      } catch (const std::exception& e) {
        throw std::runtime_error(std::string("config: parse failure: ") + e.what());
      }
      apply_json(c, j);
    }
  }
  if (env) apply_env(c);
  c.validate();
  return c;
}

Config Config::from_json_text(const std::string& text, bool env) {
  Config c;
  if (text.find_first_not_of(" \t\r\n") != std::string::npos)
    apply_json(c, ojson::parse(text));
  if (env) apply_env(c);
  c.validate();
  return c;
}

ojson Config::to_json() const {
  ojson j;
  j["grid"] = {{"n", grid_n}, {"L", grid_L}};
  j["collision"] = {{"out_n", out_n},
                    {"mu_nodes", mu_nodes},
                    {"phi_nodes", phi_nodes},
                    {"tail_cutoff", tail_cutoff}};
  j["symbol"] = {{"node_mult", node_mult}, {"lambda_min", lambda_min}};
  j["partitions"] = {{"ramp", ramp}};
  j["verify"] = {{"seed", seed}, {"trials", trials}, {"out_dir", out_dir}};
  j["tolerances"] = {{"partition", tol_partition}, {"mass", tol_mass},
                     {"weak", tol_weak},           {"oracle", tol_oracle},
                     {"dilation", tol_dilation},   {"refine", tol_refine}};
  j["threads"] = threads;
  return j;
}

std::string Config::canonical_text() const { return to_json().dump(2); }

std::string Config::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : canonical_text()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void Config::validate() const {
  if (!is_pow2(grid_n) || grid_n < 8) bad("grid.n", "must be a power of two >= 8");
  if (!(grid_L > 0.0)) bad("grid.L", "must be positive");
  if (out_n < 8 || out_n % 2 != 0) bad("collision.out_n", "must be even and >= 8");
  if (mu_nodes < 4) bad("collision.mu_nodes", "must be >= 4");
  if (phi_nodes < 4) bad("collision.phi_nodes", "must be >= 4");
  if (tail_cutoff < 0.0) bad("collision.tail_cutoff", "must be >= 0");
  if (!(node_mult > 0.0)) bad("symbol.node_mult", "must be positive");
  if (!(lambda_min > 0.0)) bad("symbol.lambda_min", "must be positive");
  if (ramp != "exp" && ramp != "quintic")
    bad("partitions.ramp", "must be 'exp' or 'quintic'");
  if (trials < 1) bad("verify.trials", "must be >= 1");
  for (auto [name, v] : {std::pair<const char*, double>{"tolerances.partition", tol_partition},
                         {"tolerances.mass", tol_mass},
                         {"tolerances.weak", tol_weak},
                         {"tolerances.oracle", tol_oracle},
                         {"tolerances.dilation", tol_dilation},
                         {"tolerances.refine", tol_refine}})
    if (!(v > 0.0)) bad(name, "must be positive");
  if (threads < 0) bad("threads", "must be >= 0");
}

}  // namespace gainterm
