#pragma once

#include <algorithm>
#include <stdexcept>

namespace cdinn {

// Parameter-constrained ReLU: max(a*s, s) with a in [0,1]. Convex and
// non-decreasing over the whole slope range; a=0 is ReLU, a=1 is identity.
inline double pc_relu(double s, double a) {
  if (!(a >= 0.0 && a <= 1.0))
    throw std::invalid_argument("pc_relu: slope outside [0,1]");
  return std::max(a * s, s);
}

// Derivative w.r.t. s. The kink sits at s=0; the right branch (slope 1) is
// used there so ReLU and PC-ReLU share one subgradient convention.
inline double pc_relu_deriv(double s, double a) { return s >= 0.0 ? 1.0 : a; }

// Derivative w.r.t. the slope parameter a.
inline double pc_relu_slope_deriv(double s) { return s < 0.0 ? s : 0.0; }

}  // namespace cdinn
