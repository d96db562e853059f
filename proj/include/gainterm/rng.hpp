#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "gainterm/vec3.hpp"

namespace gainterm {

/// Seeded generator with explicit variate code so that streams are identical
/// across standard libraries and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in [0,1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  /// Log-uniform in [a,b], a,b > 0.
  double log_uniform(double a, double b) {
    return std::exp(uniform(std::log(a), std::log(b)));
  }

  /// Integer in [lo, hi] inclusive.
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(uniform() * static_cast<double>(hi - lo + 1));
  }

  /// Standard normal (Box-Muller).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  Vec3 box(double half_width) {
    return {uniform(-half_width, half_width), uniform(-half_width, half_width),
            uniform(-half_width, half_width)};
  }

  Vec3 unit_vector() {
    while (true) {
      Vec3 v{normal(), normal(), normal()};
      double n = norm(v);
      if (n > 1e-12) return v / n;
    }
  }

 private:
  std::mt19937_64 gen_;
  double spare_{0.0};
  bool have_spare_{false};
};

}  // namespace gainterm
