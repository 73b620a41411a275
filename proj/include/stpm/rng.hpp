// Deterministic random source: one engine per run, seeded once.
#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace stpm {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform integer in [lo, hi], both inclusive.
  int uniform_int(int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    return d(gen_);
  }

  // Uniform real in [0, 1).
  double uniform_real() {
    std::uniform_real_distribution<double> d(0.0, 1.0);
    return d(gen_);
  }

  // mean + sigma * z with z standard normal; sigma == 0 still consumes draws,
  // so specs that differ only in a constant produce identical noise.
  double gauss(double mean, double sigma) {
    std::normal_distribution<double> d(0.0, 1.0);
    return mean + sigma * d(gen_);
  }

  bool coin() { return uniform_int(0, 1) == 1; }

  // k distinct values from [0, n) via Floyd's algorithm; O(k^2), no O(n) scratch.
  std::vector<int> sample_distinct(int n, int k) {
    std::vector<int> out;
    if (k >= n) {
      out.resize(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = i;
      return out;
    }
    out.reserve(static_cast<std::size_t>(k));
    for (int j = n - k; j < n; ++j) {
      int t = uniform_int(0, j);
      if (std::find(out.begin(), out.end(), t) != out.end()) {
        out.push_back(j);
      } else {
        out.push_back(t);
      }
    }
    return out;
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace stpm
