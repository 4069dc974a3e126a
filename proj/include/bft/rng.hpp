#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace bft {

// Seeded mt19937_64 with explicit mappings to doubles. The standard
// distributions are implementation-defined, so every draw is built from
// raw 64-bit outputs to keep streams identical across platforms.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Uniform on the open interval (-bound, bound). The half-ulp offset
  // keeps both endpoints unreachable.
  double uniform_sym(double bound) {
    double u = (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
    return bound * (2.0 * u - 1.0);
  }

  // Standard normal via Box-Muller; one spare value is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
    double u2 = (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  // Uniform integer in [lo, hi] inclusive, by rejection.
  int uniform_int(int lo, int hi) {
    uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    uint64_t v = gen_();
    while (v >= limit) v = gen_();
    return lo + static_cast<int>(v % span);
  }

  // Fisher-Yates permutation of {0, .., n-1}.
  std::vector<int> permutation(int n) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    for (int i = n - 1; i > 0; --i) {
      int j = uniform_int(0, i);
      std::swap(p[i], p[j]);
    }
    return p;
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace bft
