#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace incdyn {

/// Deterministic random source. All sampling in the library goes through
/// this wrapper so that seeded runs are bitwise reproducible: the engine is
/// the fully specified mt19937_64 and the double mappings below avoid the
/// implementation-defined std:: distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in (0, 1].
  double uniform01_pos() { return 1.0 - uniform01(); }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  /// Standard exponential variate.
  double exponential() { return -std::log(uniform01_pos()); }

  /// Uniform sample from the (n-1)-simplex (unit-parameter Dirichlet),
  /// drawn as normalized exponentials.
  std::vector<double> simplex_uniform(std::size_t n) {
    std::vector<double> w(n);
    for (;;) {
      double total = 0.0;
      for (auto& v : w) {
        v = exponential();
        total += v;
      }
      if (total > 0.0) {
        for (auto& v : w) v /= total;
        return w;
      }
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace incdyn
