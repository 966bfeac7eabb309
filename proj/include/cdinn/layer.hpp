#pragma once

#include "cdinn/activation.hpp"
#include "cdinn/matrix.hpp"

namespace cdinn {

enum class Activation { pc_relu, linear };

// One dense layer. The z-path weight is either `raw_z_weight` (stored raw and
// applied squared entrywise, so the effective weight is nonnegative without
// any projection step) or `free_weight` (applied as-is). `passthrough_weight`
// maps the network input x straight into this layer's pre-activation.
struct DenseLayerParams {
  Matrix raw_z_weight;
  Matrix free_weight;
  Matrix passthrough_weight;
  Vector bias;
  Vector prelu_slope;  // per-neuron a in [0,1]; empty for linear layers

  bool constrained = false;      // selects raw_z_weight (squared) as the z-path
  bool use_passthrough = false;
  bool bias_enabled = true;
  bool slope_trainable = true;   // fixed-ReLU layers keep slope 0 and frozen
  Activation activation = Activation::pc_relu;

  std::size_t out_dim() const { return constrained ? raw_z_weight.rows : free_weight.rows; }
  std::size_t in_dim() const { return constrained ? raw_z_weight.cols : free_weight.cols; }

  const Matrix& z_weight() const { return constrained ? raw_z_weight : free_weight; }
  Matrix& z_weight() { return constrained ? raw_z_weight : free_weight; }

  // Effective z-path weight (squared when constrained).
  Matrix effective_z_weight() const {
    return constrained ? elementwise_square(raw_z_weight) : free_weight;
  }
};

// Writes the pre-activation into `pre` and the activated output into `out`.
// Used by the training loop with preallocated buffers.
inline void dense_forward_into(const DenseLayerParams& layer, const Vector& z_prev,
                                const Vector& x, Vector& pre, Vector& out) {
  const std::size_t n = layer.out_dim();
  pre.assign(n, 0.0);
  if (layer.bias_enabled) {
    require(layer.bias.size() == n, "dense_forward: bias shape mismatch");
    for (std::size_t i = 0; i < n; ++i) pre[i] = layer.bias[i];
  }
  if (layer.constrained)
    matvec_squared_add(layer.raw_z_weight, z_prev, pre);
  else
    matvec_add(layer.free_weight, z_prev, pre);
  if (layer.use_passthrough) matvec_add(layer.passthrough_weight, x, pre);

  out.resize(n);
  if (layer.activation == Activation::linear) {
    out = pre;
  } else {
    for (std::size_t i = 0; i < n; ++i)
      out[i] = std::max(layer.prelu_slope[i] * pre[i], pre[i]);
  }
}

// Spec-facing form: flags passed explicitly.
inline Vector dense_forward(const DenseLayerParams& layer, const Vector& z_prev,
                            const Vector& x, bool use_passthrough, bool constrained) {
  DenseLayerParams tmp = layer;
  tmp.use_passthrough = use_passthrough;
  tmp.constrained = constrained;
  Vector pre, out;
  dense_forward_into(tmp, z_prev, x, pre, out);
  return out;
}

inline Vector dense_forward(const DenseLayerParams& layer, const Vector& z_prev, const Vector& x) {
  Vector pre, out;
  dense_forward_into(layer, z_prev, x, pre, out);
  return out;
}

// Gradient mirror of DenseLayerParams.
struct LayerGrads {
  Matrix raw_z_weight;
  Matrix free_weight;
  Matrix passthrough_weight;
  Vector bias;
  Vector prelu_slope;

  void zero() {
    std::fill(raw_z_weight.data.begin(), raw_z_weight.data.end(), 0.0);
    std::fill(free_weight.data.begin(), free_weight.data.end(), 0.0);
    std::fill(passthrough_weight.data.begin(), passthrough_weight.data.end(), 0.0);
    std::fill(bias.begin(), bias.end(), 0.0);
    std::fill(prelu_slope.begin(), prelu_slope.end(), 0.0);
  }
};

inline LayerGrads make_layer_grads(const DenseLayerParams& p) {
  LayerGrads g;
  g.raw_z_weight = Matrix(p.raw_z_weight.rows, p.raw_z_weight.cols);
  g.free_weight = Matrix(p.free_weight.rows, p.free_weight.cols);
  g.passthrough_weight = Matrix(p.passthrough_weight.rows, p.passthrough_weight.cols);
  g.bias.assign(p.bias.size(), 0.0);
  g.prelu_slope.assign(p.prelu_slope.size(), 0.0);
  return g;
}

}  // namespace cdinn
