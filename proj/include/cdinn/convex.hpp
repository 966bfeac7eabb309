#pragma once

#include <memory>
#include <utility>

#include "cdinn/network.hpp"

namespace cdinn {

// One side of the DC split f = f1 - f2: a stack of convex hidden layers with
// a nonnegative readout, plus an affine term in the raw input (pass-through
// heads and degenerate trunks land there).
//
//   piece(x) = output_weight . z_K(x) + input_affine . x + offset
//
// The trunk holds hidden layers only (no head); an empty trunk means z_K = x.
// Pieces own their trunk via shared_ptr so the two halves of a cdinn1 split
// share one copy and stay valid independently of the source network.
struct ConvexPiece {
  std::shared_ptr<const std::vector<DenseLayerParams>> trunk;
  Vector output_weight;
  Vector input_affine;
  double offset = 0.0;
  std::size_t input_dim = 0;

  bool is_zero() const { return output_weight.empty() && input_affine.empty(); }
};

namespace detail {

inline void check_piece_trunk(const std::vector<DenseLayerParams>& trunk) {
  for (std::size_t l = 0; l < trunk.size(); ++l) {
    require(l == 0 || trunk[l].constrained,
            "ConvexPiece: inner trunk layers must have nonnegative z-weights");
    require(trunk[l].activation == Activation::pc_relu,
            "ConvexPiece: trunk activations must be piecewise linear");
  }
}

inline const std::vector<DenseLayerParams>& empty_trunk() {
  static const std::vector<DenseLayerParams> t;
  return t;
}

}  // namespace detail

inline double piece_eval(const ConvexPiece& piece, const Vector& x) {
  require(x.size() == piece.input_dim || piece.is_zero(), "piece_eval: dimension mismatch");
  double y = piece.offset;
  if (!piece.input_affine.empty()) y += dot(piece.input_affine, x);
  if (!piece.output_weight.empty()) {
    const auto& trunk = piece.trunk ? *piece.trunk : detail::empty_trunk();
    Vector z = x, pre, out;
    for (const auto& layer : trunk) {
      dense_forward_into(layer, z, x, pre, out);
      z = out;
    }
    y += dot(piece.output_weight, z);
  }
  return y;
}

// Gradient of the piece at x under the slope-1-at-kink convention.
inline Vector piece_grad(const ConvexPiece& piece, const Vector& x) {
  Vector g(x.size(), 0.0);
  if (!piece.input_affine.empty())
    for (std::size_t i = 0; i < x.size(); ++i) g[i] += piece.input_affine[i];
  if (piece.output_weight.empty()) return g;

  const auto& trunk = piece.trunk ? *piece.trunk : detail::empty_trunk();
  std::vector<Vector> pre(trunk.size()), act(trunk.size());
  const Vector* prev = &x;
  for (std::size_t l = 0; l < trunk.size(); ++l) {
    dense_forward_into(trunk[l], *prev, x, pre[l], act[l]);
    prev = &act[l];
  }
  Vector delta = piece.output_weight;
  for (std::size_t li = trunk.size(); li-- > 0;) {
    const DenseLayerParams& layer = trunk[li];
    for (std::size_t i = 0; i < layer.out_dim(); ++i)
      delta[i] *= pc_relu_deriv(pre[li][i], layer.prelu_slope[i]);
    Vector next(layer.in_dim(), 0.0);
    if (layer.constrained) {
      for (std::size_t i = 0; i < layer.out_dim(); ++i) {
        const double* row = layer.raw_z_weight.row_ptr(i);
        for (std::size_t j = 0; j < layer.in_dim(); ++j) next[j] += delta[i] * row[j] * row[j];
      }
    } else {
      for (std::size_t i = 0; i < layer.out_dim(); ++i) {
        const double* row = layer.free_weight.row_ptr(i);
        for (std::size_t j = 0; j < layer.in_dim(); ++j) next[j] += delta[i] * row[j];
      }
    }
    if (layer.use_passthrough) {
      for (std::size_t i = 0; i < layer.out_dim(); ++i) {
        const double* row = layer.passthrough_weight.row_ptr(i);
        for (std::size_t j = 0; j < x.size(); ++j) g[j] += delta[i] * row[j];
      }
    }
    if (li == 0)
      for (std::size_t j = 0; j < x.size(); ++j) g[j] += next[j];
    else
      delta = std::move(next);
  }
  // No trunk: z_K is x itself and the readout acts on it directly.
  if (trunk.empty())
    for (std::size_t j = 0; j < x.size(); ++j) g[j] += piece.output_weight[j];
  return g;
}

namespace detail {

inline ConvexPiece zero_piece(std::size_t input_dim) {
  ConvexPiece p;
  p.input_dim = input_dim;
  return p;
}

inline ConvexPiece head_piece(std::shared_ptr<const std::vector<DenseLayerParams>> trunk,
                              const DenseLayerParams& head, std::size_t input_dim) {
  ConvexPiece p;
  p.trunk = std::move(trunk);
  p.input_dim = input_dim;
  const Matrix w = head.effective_z_weight();
  p.output_weight.assign(w.row_ptr(0), w.row_ptr(0) + w.cols);
  if (head.use_passthrough)
    p.input_affine.assign(head.passthrough_weight.row_ptr(0),
                          head.passthrough_weight.row_ptr(0) + head.passthrough_weight.cols);
  p.offset = head.bias_enabled ? head.bias[0] : 0.0;
  return p;
}

}  // namespace detail

// Splits a network into convex pieces with forward(net, x) = f1(x) - f2(x).
// cdinn1 (and a single-hidden-layer standard net) sign-split the head weights
// over a shared trunk; cdinn2 contributes one piece per trunk; an icnn is
// already convex, so f2 = 0.
inline std::pair<ConvexPiece, ConvexPiece> dc_split(const NetworkParams& net) {
  const NetworkSpec& spec = net.spec;
  require(!is_recurrent(spec.kind), "dc_split: recurrent kinds are not supported");

  auto hidden_copy = [](const std::vector<DenseLayerParams>& trunk) {
    auto t = std::make_shared<std::vector<DenseLayerParams>>(trunk.begin(), trunk.end() - 1);
    detail::check_piece_trunk(*t);
    return t;
  };

  switch (spec.kind) {
    case NetKind::icnn: {
      ConvexPiece f1 = detail::head_piece(hidden_copy(net.trunks[0]), net.trunks[0].back(),
                                          spec.input_dim);
      return {f1, detail::zero_piece(spec.input_dim)};
    }
    case NetKind::cdinn2: {
      ConvexPiece f1 = detail::head_piece(hidden_copy(net.trunks[0]), net.trunks[0].back(),
                                          spec.input_dim);
      ConvexPiece f2 = detail::head_piece(hidden_copy(net.trunks[1]), net.trunks[1].back(),
                                          spec.input_dim);
      return {f1, f2};
    }
    case NetKind::standard:
      require(spec.hidden_widths.size() == 1,
              "dc_split: deep standard networks have no polyhedral DC split here");
      [[fallthrough]];
    case NetKind::cdinn1: {
      auto trunk = hidden_copy(net.trunks[0]);
      const DenseLayerParams& head = net.trunks[0].back();
      require(!head.constrained, "dc_split: expected an unconstrained head");
      ConvexPiece f1, f2;
      f1.trunk = trunk;
      f2.trunk = trunk;
      f1.input_dim = f2.input_dim = spec.input_dim;
      const Matrix& w = head.free_weight;
      f1.output_weight.resize(w.cols);
      f2.output_weight.resize(w.cols);
      for (std::size_t j = 0; j < w.cols; ++j) {
        f1.output_weight[j] = std::max(w(0, j), 0.0);
        f2.output_weight[j] = std::max(-w(0, j), 0.0);
      }
      if (head.use_passthrough)
        f1.input_affine.assign(head.passthrough_weight.row_ptr(0),
                               head.passthrough_weight.row_ptr(0) + head.passthrough_weight.cols);
      f1.offset = head.bias_enabled ? head.bias[0] : 0.0;
      return {f1, f2};
    }
    default:
      throw std::invalid_argument("dc_split: unsupported kind");
  }
}

// Builds an icnn computing max_i (slope_i . x + intercept_i) exactly, by
// chaining max(u, v) = relu(u - v) + v through one-unit hidden layers with a
// pass-through carrying x.
inline NetworkParams max_affine_construct(const std::vector<std::pair<Vector, double>>& affines) {
  require(!affines.empty(), "max_affine_construct: empty affine list");
  const std::size_t d = affines.front().first.size();
  require(d >= 1, "max_affine_construct: zero-dimensional affines");
  for (const auto& a : affines)
    require(a.first.size() == d, "max_affine_construct: inconsistent dimensions");
  const std::size_t k = affines.size();

  NetworkParams net;
  net.spec.kind = NetKind::icnn;
  net.spec.input_dim = d;
  net.spec.output_dim = 1;
  net.spec.passthrough_enabled = true;
  net.spec.bias_enabled = true;
  net.spec.activation = HiddenActivation::relu;
  net.spec.hidden_widths.assign(k > 1 ? k - 1 : 0, 1);

  // Layer j computes relu(z_{j-1} + (a_j - a_{j+1}) . x + (b_j - b_{j+1}));
  // inductively z_j = max(a_1.x+b_1, ..., a_{j+1}.x+b_{j+1}) - (a_{j+1}.x+b_{j+1}).
  std::vector<DenseLayerParams> trunk;
  for (std::size_t j = 1; j < k; ++j) {
    DenseLayerParams l;
    l.activation = Activation::pc_relu;
    l.slope_trainable = false;
    l.prelu_slope.assign(1, 0.0);
    l.bias.assign(1, affines[j - 1].second - affines[j].second);
    Matrix x_map(1, d);
    for (std::size_t c = 0; c < d; ++c)
      x_map(0, c) = affines[j - 1].first[c] - affines[j].first[c];
    if (j == 1) {
      // No z input yet: the x map is the layer's own input map.
      l.constrained = false;
      l.free_weight = std::move(x_map);
    } else {
      l.constrained = true;
      l.raw_z_weight = Matrix(1, 1, 1.0);  // effective weight 1
      l.use_passthrough = true;
      l.passthrough_weight = std::move(x_map);
    }
    trunk.push_back(std::move(l));
  }

  DenseLayerParams head;
  head.activation = Activation::linear;
  head.slope_trainable = false;
  head.bias_enabled = true;
  head.constrained = true;
  head.use_passthrough = true;
  head.raw_z_weight = (k > 1) ? Matrix(1, 1, 1.0) : Matrix(1, d, 0.0);
  head.passthrough_weight = Matrix(1, d);
  for (std::size_t c = 0; c < d; ++c) head.passthrough_weight(0, c) = affines[k - 1].first[c];
  head.bias.assign(1, affines[k - 1].second);
  trunk.push_back(std::move(head));

  net.trunks.push_back(std::move(trunk));
  return net;
}

}  // namespace cdinn
