#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

#include "cdinn/matrix.hpp"

namespace cdinn {

// All randomness in the library flows through a seeded Rng so every run
// replays exactly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal(double mean = 0.0, double stddev = 1.0) {
    std::normal_distribution<double> d(mean, stddev);
    return d(engine_);
  }

  double uniform(double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(engine_);
  }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// Weight init with variance 2 / (fan_in + fan_out); biases are zero-initialized
// separately by the builders.
inline Matrix xavier_normal_init(std::size_t rows, std::size_t cols, Rng& rng) {
  if (rows == 0 || cols == 0)
    throw std::invalid_argument("xavier_normal_init: zero dimension");
  const double stddev = std::sqrt(2.0 / static_cast<double>(rows + cols));
  Matrix w(rows, cols);
  for (double& v : w.data) v = rng.normal(0.0, stddev);
  return w;
}

inline Matrix xavier_normal_init(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  return xavier_normal_init(rows, cols, rng);
}

}  // namespace cdinn
