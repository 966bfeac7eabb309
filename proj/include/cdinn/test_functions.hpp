#pragma once

#include <cmath>
#include <limits>

#include "cdinn/matrix.hpp"

namespace cdinn {

// Ground-truth objectives for the optimization benchmarks. Each carries a +5
// offset so the global minimum sits at 5.

// Three-hump camel + 5 on [-5,5]^2; non-convex, minimum 5 at the origin.
inline double camel3_plus5(const Vector& x) {
  require(x.size() == 2, "camel3_plus5: expects a 2-vector");
  const double x1 = x[0], x2 = x[1];
  return 2.0 * x1 * x1 - 1.05 * std::pow(x1, 4) + std::pow(x1, 6) / 6.0 + x1 * x2 + x2 * x2 + 5.0;
}

// Sum of increasing powers + 5 on [-1,1]^5; convex, minimum 5 at the origin.
inline double sumpower_plus5(const Vector& x) {
  require(x.size() == 5, "sumpower_plus5: expects a 5-vector");
  double s = 0.0;
  for (std::size_t i = 0; i < 5; ++i) s += std::pow(std::abs(x[i]), double(i + 2));
  return s + 5.0;
}

// Matyas + 5 on [-10,10]^2; convex, minimum 5 at the origin.
inline double matyas_plus5(const Vector& x) {
  require(x.size() == 2, "matyas_plus5: expects a 2-vector");
  return 0.26 * (x[0] * x[0] + x[1] * x[1]) - 0.48 * x[0] * x[1] + 5.0;
}

// Two-spill pollutant transport: superposed 1-D diffusion kernels. The field
// is discontinuous on {t = tau} at each event because a spill contributes
// only strictly after it happens.
struct SpillParams {
  double mass = 10.0;
  double diffusion = 0.07;
  std::vector<std::pair<double, double>> events = {{0.0, 0.0}, {0.8, 10.0}};  // (location, time)
  // Simulation domain.
  double loc_min = 0.01, loc_max = 1.0;
  double time_min = 0.01, time_max = 15.0;

  void validate() const {
    require(diffusion > 0.0, "SpillParams: diffusion must be positive");
    double prev = -std::numeric_limits<double>::infinity();
    for (const auto& [loc, tau] : events) {
      require(tau >= 0.0 && tau > prev, "SpillParams: event times must be nonnegative, increasing");
      prev = tau;
      (void)loc;
    }
  }
};

inline double spill_concentration(double location, double time, const SpillParams& p) {
  double c = 0.0;
  for (const auto& [loc, tau] : p.events) {
    if (time > tau) {
      const double dt = time - tau;
      const double denom = 4.0 * p.diffusion * dt;
      c += p.mass / std::sqrt(M_PI * denom) * std::exp(-(location - loc) * (location - loc) / denom);
    }
  }
  return c;
}

}  // namespace cdinn
