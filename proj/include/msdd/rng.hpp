#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace msdd {

/// Independent random stream derived from (seed, name). Adding a consumer
/// with a new name never shifts the numbers drawn by existing ones.
class NamedStream {
 public:
  NamedStream(std::uint64_t seed, std::string_view name) : engine_(derive(seed, name)) {}

  /// Uniform in [0, 1) with 53 random bits; platform independent unlike
  /// std::uniform_real_distribution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal by Box-Muller on uniform().
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * 3.14159265358979323846 * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  static std::uint64_t derive(std::uint64_t seed, std::string_view name) {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
    for (unsigned char ch : name) {
      h ^= ch;
      h *= 1099511628211ULL;
    }
    std::uint64_t z = seed ^ h;  // splitmix64 finaliser
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace msdd
