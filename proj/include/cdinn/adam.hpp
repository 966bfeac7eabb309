#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "cdinn/matrix.hpp"

namespace cdinn {

enum class ParamKind { weight, bias, slope };

// Parameter tensor plus its gradient slot, flattened. The refs for a network
// are enumerated in one fixed order so the optimizer state lines up across
// steps and runs.
struct ParamRef {
  double* value = nullptr;
  double* grad = nullptr;
  std::size_t size = 0;
  ParamKind kind = ParamKind::weight;
};

struct AdamConfig {
  double lr = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  Vector m;  // first moment, one entry per scalar parameter
  Vector v;  // second moment
  long step = 0;
  AdamConfig cfg;

  explicit AdamState(std::size_t total = 0, AdamConfig c = {})
      : m(total, 0.0), v(total, 0.0), cfg(c) {}
};

inline std::size_t total_size(const std::vector<ParamRef>& refs) {
  std::size_t n = 0;
  for (const auto& r : refs) n += r.size;
  return n;
}

// One bias-corrected Adam update over all refs. PC-ReLU slopes are projected
// back to [0,1] afterwards; that is the only constrained parameter class the
// update has to repair (z-path weights stay nonnegative by construction).
inline void adam_step(AdamState& st, const std::vector<ParamRef>& refs) {
  require(st.m.size() == total_size(refs), "adam_step: state size mismatch");
  ++st.step;
  const double b1 = st.cfg.beta1, b2 = st.cfg.beta2;
  const double corr1 = 1.0 - std::pow(b1, static_cast<double>(st.step));
  const double corr2 = 1.0 - std::pow(b2, static_cast<double>(st.step));
  std::size_t off = 0;
  for (const auto& r : refs) {
    for (std::size_t i = 0; i < r.size; ++i) {
      const double g = r.grad[i];
      double& m = st.m[off + i];
      double& v = st.v[off + i];
      m = b1 * m + (1.0 - b1) * g;
      v = b2 * v + (1.0 - b2) * g * g;
      const double mhat = m / corr1;
      const double vhat = v / corr2;
      r.value[i] -= st.cfg.lr * mhat / (std::sqrt(vhat) + st.cfg.epsilon);
    }
    if (r.kind == ParamKind::slope) {
      for (std::size_t i = 0; i < r.size; ++i)
        r.value[i] = std::min(1.0, std::max(0.0, r.value[i]));
    }
    off += r.size;
  }
}

}  // namespace cdinn
