#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cdinn/adam.hpp"
#include "cdinn/layer.hpp"
#include "cdinn/rng.hpp"

namespace cdinn {

enum class NetKind { standard, icnn, cdinn1, cdinn2, recurrent_icnn, recurrent_cdinn };

inline bool is_recurrent(NetKind k) {
  return k == NetKind::recurrent_icnn || k == NetKind::recurrent_cdinn;
}

inline const char* to_string(NetKind k) {
  switch (k) {
    case NetKind::standard: return "standard";
    case NetKind::icnn: return "icnn";
    case NetKind::cdinn1: return "cdinn1";
    case NetKind::cdinn2: return "cdinn2";
    case NetKind::recurrent_icnn: return "ricnn";
    case NetKind::recurrent_cdinn: return "rcdinn";
  }
  return "?";
}

inline NetKind parse_net_kind(const std::string& s) {
  if (s == "standard") return NetKind::standard;
  if (s == "icnn") return NetKind::icnn;
  if (s == "cdinn1") return NetKind::cdinn1;
  if (s == "cdinn2") return NetKind::cdinn2;
  if (s == "ricnn" || s == "recurrent_icnn") return NetKind::recurrent_icnn;
  if (s == "rcdinn" || s == "recurrent_cdinn") return NetKind::recurrent_cdinn;
  throw std::invalid_argument("unknown architecture: " + s);
}

enum class HiddenActivation { kind_default, relu, pc_relu };

struct NetworkSpec {
  NetKind kind = NetKind::cdinn1;
  std::size_t input_dim = 1;
  // Hidden widths of the trunk; for cdinn2 they describe each of the two
  // disjoint trunks. Recurrent kinds take a single entry (state size).
  std::vector<std::size_t> hidden_widths = {30};
  std::size_t output_dim = 1;
  HiddenActivation activation = HiddenActivation::kind_default;
  bool passthrough_enabled = false;
  bool bias_enabled = true;
  bool expand_recurrent_input = false;  // recurrent_cdinn only; ricnn always expands
  std::uint64_t rng_seed = 0;
  double initial_slope = 0.25;
};

// Recurrent cell: z_t = act(U x_t + Z z_{t-1} [+ D x_{t-1}]),
//                 y_t = f_a(M z_t [+ N z_{t-1} + V x_t]).
// Z (and every map flagged constrained) is stored raw and applied squared.
struct RecurrentParams {
  Matrix u_in;
  Matrix z_rec;
  Matrix m_out;
  Matrix d_in_prev;   // pass-through maps; empty when not used
  Matrix n_rec_out;
  Matrix v_in_out;
  Vector bias_z;
  Vector bias_y;
  Vector prelu_slope;

  bool u_constrained = false;
  bool m_constrained = false;
  bool passthroughs = false;
  bool bias_enabled = true;
  bool slope_trainable = true;
  bool expand_input = false;  // feed [u; -u] instead of u
  bool relu_output = false;   // f_a: linear by default

  std::size_t state_dim() const { return z_rec.rows; }
  std::size_t external_input_dim() const {
    return expand_input ? u_in.cols / 2 : u_in.cols;
  }
};

struct RecurrentGrads {
  Matrix u_in, z_rec, m_out, d_in_prev, n_rec_out, v_in_out;
  Vector bias_z, bias_y, prelu_slope;

  void zero() {
    auto z = [](Matrix& m) { std::fill(m.data.begin(), m.data.end(), 0.0); };
    z(u_in); z(z_rec); z(m_out); z(d_in_prev); z(n_rec_out); z(v_in_out);
    std::fill(bias_z.begin(), bias_z.end(), 0.0);
    std::fill(bias_y.begin(), bias_y.end(), 0.0);
    std::fill(prelu_slope.begin(), prelu_slope.end(), 0.0);
  }
};

// Feedforward kinds hold one or two trunks; the last layer of each trunk is
// its linear output head. Recurrent kinds hold `rec` and keep trunks empty.
struct NetworkParams {
  NetworkSpec spec;
  std::vector<std::vector<DenseLayerParams>> trunks;
  RecurrentParams rec;
};

struct GradStore {
  std::vector<std::vector<LayerGrads>> trunks;
  RecurrentGrads rec;
  Vector input_grad;

  void zero() {
    for (auto& t : trunks)
      for (auto& l : t) l.zero();
    rec.zero();
    std::fill(input_grad.begin(), input_grad.end(), 0.0);
  }
};

inline GradStore make_grad_store(const NetworkParams& net) {
  GradStore g;
  g.trunks.resize(net.trunks.size());
  for (std::size_t t = 0; t < net.trunks.size(); ++t)
    for (const auto& layer : net.trunks[t]) g.trunks[t].push_back(make_layer_grads(layer));
  const RecurrentParams& r = net.rec;
  g.rec.u_in = Matrix(r.u_in.rows, r.u_in.cols);
  g.rec.z_rec = Matrix(r.z_rec.rows, r.z_rec.cols);
  g.rec.m_out = Matrix(r.m_out.rows, r.m_out.cols);
  g.rec.d_in_prev = Matrix(r.d_in_prev.rows, r.d_in_prev.cols);
  g.rec.n_rec_out = Matrix(r.n_rec_out.rows, r.n_rec_out.cols);
  g.rec.v_in_out = Matrix(r.v_in_out.rows, r.v_in_out.cols);
  g.rec.bias_z.assign(r.bias_z.size(), 0.0);
  g.rec.bias_y.assign(r.bias_y.size(), 0.0);
  g.rec.prelu_slope.assign(r.prelu_slope.size(), 0.0);
  g.input_grad.assign(net.spec.input_dim, 0.0);
  return g;
}

namespace detail {

inline Activation resolve_hidden_activation(const NetworkSpec& spec, bool& trainable) {
  HiddenActivation a = spec.activation;
  if (a == HiddenActivation::kind_default) {
    a = (spec.kind == NetKind::icnn || spec.kind == NetKind::recurrent_icnn)
            ? HiddenActivation::relu
            : HiddenActivation::pc_relu;
  }
  trainable = (a == HiddenActivation::pc_relu);
  return Activation::pc_relu;  // relu is pc_relu with slope 0, frozen
}

inline DenseLayerParams make_layer(std::size_t out, std::size_t in, std::size_t input_dim,
                                   bool constrained, bool passthrough, bool bias_enabled,
                                   Activation act, double slope, bool slope_trainable,
                                   Rng& rng) {
  DenseLayerParams l;
  l.constrained = constrained;
  l.use_passthrough = passthrough;
  l.bias_enabled = bias_enabled;
  l.activation = act;
  l.slope_trainable = slope_trainable && act == Activation::pc_relu;
  if (constrained)
    l.raw_z_weight = (in > 0) ? xavier_normal_init(out, in, rng) : Matrix(out, 0);
  else
    l.free_weight = xavier_normal_init(out, in, rng);
  if (passthrough) l.passthrough_weight = xavier_normal_init(out, input_dim, rng);
  l.bias.assign(out, 0.0);
  if (act == Activation::pc_relu) l.prelu_slope.assign(out, slope);
  return l;
}

// One ICNN-style trunk plus linear head. Layer 0 carries the unconstrained
// input map; inner z-paths are squared. `free_head` leaves the head weights
// unconstrained (cdinn1 / standard).
inline std::vector<DenseLayerParams> make_trunk(const NetworkSpec& spec,
                                                const std::vector<std::size_t>& widths,
                                                bool constrain_inner, bool free_head,
                                                Rng& rng) {
  bool slope_trainable = true;
  Activation act = resolve_hidden_activation(spec, slope_trainable);
  const double slope0 = slope_trainable ? spec.initial_slope : 0.0;

  std::vector<DenseLayerParams> trunk;
  std::size_t prev = spec.input_dim;
  for (std::size_t i = 0; i < widths.size(); ++i) {
    const bool constrained = constrain_inner && i > 0;
    const bool pt = spec.passthrough_enabled && i > 0;
    trunk.push_back(make_layer(widths[i], prev, spec.input_dim, constrained, pt,
                               spec.bias_enabled, act, slope0, slope_trainable, rng));
    prev = widths[i];
  }
  trunk.push_back(make_layer(spec.output_dim, prev, spec.input_dim, !free_head,
                             spec.passthrough_enabled, spec.bias_enabled,
                             Activation::linear, 0.0, false, rng));
  return trunk;
}

}  // namespace detail

inline NetworkParams build(const NetworkSpec& spec) {
  require(spec.input_dim >= 1, "build: input_dim must be >= 1");
  require(spec.output_dim == 1, "build: only scalar outputs are supported");
  require(!spec.hidden_widths.empty(), "build: at least one hidden layer");
  for (std::size_t w : spec.hidden_widths) require(w >= 1, "build: zero-width hidden layer");
  if (is_recurrent(spec.kind))
    require(spec.hidden_widths.size() == 1, "build: recurrent kinds take one hidden width");

  Rng rng(spec.rng_seed);
  NetworkParams net;
  net.spec = spec;

  switch (spec.kind) {
    case NetKind::standard:
      require(!spec.passthrough_enabled, "build: standard networks have no pass-through");
      net.trunks.push_back(
          detail::make_trunk(spec, spec.hidden_widths, /*constrain_inner=*/false,
                             /*free_head=*/true, rng));
      break;
    case NetKind::icnn:
      net.trunks.push_back(
          detail::make_trunk(spec, spec.hidden_widths, true, /*free_head=*/false, rng));
      break;
    case NetKind::cdinn1:
      net.trunks.push_back(
          detail::make_trunk(spec, spec.hidden_widths, true, /*free_head=*/true, rng));
      break;
    case NetKind::cdinn2:
      net.trunks.push_back(
          detail::make_trunk(spec, spec.hidden_widths, true, /*free_head=*/false, rng));
      net.trunks.push_back(
          detail::make_trunk(spec, spec.hidden_widths, true, /*free_head=*/false, rng));
      break;
    case NetKind::recurrent_icnn:
    case NetKind::recurrent_cdinn: {
      RecurrentParams& r = net.rec;
      const bool icnn = spec.kind == NetKind::recurrent_icnn;
      r.expand_input = icnn || spec.expand_recurrent_input;
      r.passthroughs = icnn && spec.passthrough_enabled;
      r.u_constrained = icnn;
      r.m_constrained = icnn;
      r.bias_enabled = spec.bias_enabled;
      const std::size_t h = spec.hidden_widths[0];
      const std::size_t xin = spec.input_dim * (r.expand_input ? 2 : 1);
      r.u_in = xavier_normal_init(h, xin, rng);
      r.z_rec = xavier_normal_init(h, h, rng);
      r.m_out = xavier_normal_init(spec.output_dim, h, rng);
      if (r.passthroughs) {
        r.d_in_prev = xavier_normal_init(h, xin, rng);
        r.n_rec_out = xavier_normal_init(spec.output_dim, h, rng);
        r.v_in_out = xavier_normal_init(spec.output_dim, xin, rng);
      }
      r.bias_z.assign(h, 0.0);
      r.bias_y.assign(spec.output_dim, 0.0);
      bool slope_trainable = true;
      detail::resolve_hidden_activation(spec, slope_trainable);
      r.slope_trainable = slope_trainable;
      r.prelu_slope.assign(h, slope_trainable ? spec.initial_slope : 0.0);
      break;
    }
  }
  return net;
}

// ---------------------------------------------------------------------------
// Forward / backward (feedforward kinds)

struct ForwardCache {
  // [trunk][layer] pre-activations and activations.
  std::vector<std::vector<Vector>> pre, act;
  Vector delta, delta_next;  // backward workspace
  void ensure(const NetworkParams& net) {
    if (pre.size() != net.trunks.size()) {
      pre.assign(net.trunks.size(), {});
      act.assign(net.trunks.size(), {});
      for (std::size_t t = 0; t < net.trunks.size(); ++t) {
        pre[t].resize(net.trunks[t].size());
        act[t].resize(net.trunks[t].size());
      }
    }
  }
};

inline double forward_cached(const NetworkParams& net, const Vector& x, ForwardCache& cache) {
  require(!is_recurrent(net.spec.kind), "forward: recurrent kinds use recurrent_forward");
  require(x.size() == net.spec.input_dim, "forward: input dimension mismatch");
  cache.ensure(net);
  double out = 0.0;
  double sign = 1.0;
  for (std::size_t t = 0; t < net.trunks.size(); ++t) {
    const Vector* prev = &x;
    for (std::size_t l = 0; l < net.trunks[t].size(); ++l) {
      dense_forward_into(net.trunks[t][l], *prev, x, cache.pre[t][l], cache.act[t][l]);
      prev = &cache.act[t][l];
    }
    out += sign * cache.act[t].back()[0];
    sign = -sign;  // cdinn2 subtracts its second trunk
  }
  return out;
}

inline double forward(const NetworkParams& net, const Vector& x) {
  ForwardCache cache;
  const double y = forward_cached(net, x, cache);
  if (!std::isfinite(y)) throw std::runtime_error("forward: non-finite output");
  return y;
}

// Accumulates d(dy * output)/d(params) into `grads` (and d/dx into
// grads.input_grad). The cache must hold the forward pass for this x.
inline void backward_cached(const NetworkParams& net, const Vector& x,
                            const ForwardCache& cache, double dy, GradStore& grads) {
  double sign = 1.0;
  Vector& delta = const_cast<ForwardCache&>(cache).delta;
  Vector& delta_next = const_cast<ForwardCache&>(cache).delta_next;
  for (std::size_t t = 0; t < net.trunks.size(); ++t) {
    delta.assign(1, dy * sign);
    sign = -sign;
    for (std::size_t li = net.trunks[t].size(); li-- > 0;) {
      const DenseLayerParams& layer = net.trunks[t][li];
      LayerGrads& lg = grads.trunks[t][li];
      const Vector& pre = cache.pre[t][li];
      const Vector& z_in = (li == 0) ? x : cache.act[t][li - 1];
      const std::size_t n = layer.out_dim();

      // dpre = delta ∘ act'(pre); slope gradient rides along.
      for (std::size_t i = 0; i < n; ++i) {
        double d = delta[i];
        if (layer.activation == Activation::pc_relu) {
          const double a = layer.prelu_slope[i];
          if (layer.slope_trainable && pre[i] < 0.0) lg.prelu_slope[i] += d * pre[i];
          d *= pc_relu_deriv(pre[i], a);
        }
        delta[i] = d;
        if (layer.bias_enabled) lg.bias[i] += d;
      }

      delta_next.assign(layer.in_dim(), 0.0);
      if (layer.constrained) {
        for (std::size_t i = 0; i < n; ++i) {
          const double d = delta[i];
          const double* wrow = layer.raw_z_weight.row_ptr(i);
          double* grow = lg.raw_z_weight.row_ptr(i);
          for (std::size_t j = 0; j < layer.in_dim(); ++j) {
            grow[j] += d * 2.0 * wrow[j] * z_in[j];
            delta_next[j] += d * wrow[j] * wrow[j];
          }
        }
      } else {
        for (std::size_t i = 0; i < n; ++i) {
          const double d = delta[i];
          const double* wrow = layer.free_weight.row_ptr(i);
          double* grow = lg.free_weight.row_ptr(i);
          for (std::size_t j = 0; j < layer.in_dim(); ++j) {
            grow[j] += d * z_in[j];
            delta_next[j] += d * wrow[j];
          }
        }
      }
      if (layer.use_passthrough) {
        for (std::size_t i = 0; i < n; ++i) {
          const double d = delta[i];
          const double* wrow = layer.passthrough_weight.row_ptr(i);
          double* grow = lg.passthrough_weight.row_ptr(i);
          for (std::size_t j = 0; j < x.size(); ++j) {
            grow[j] += d * x[j];
            grads.input_grad[j] += d * wrow[j];
          }
        }
      }
      if (li == 0) {
        for (std::size_t j = 0; j < x.size(); ++j) grads.input_grad[j] += delta_next[j];
      } else {
        std::swap(delta, delta_next);
      }
    }
  }
}

// Gradients of the scalar output w.r.t. every raw parameter and w.r.t. x.
inline GradStore backward(const NetworkParams& net, const Vector& x) {
  ForwardCache cache;
  forward_cached(net, x, cache);
  GradStore grads = make_grad_store(net);
  backward_cached(net, x, cache, 1.0, grads);
  return grads;
}

// ---------------------------------------------------------------------------
// Trainable parameter enumeration (order is part of the training contract).

inline std::vector<ParamRef> trainable_refs(NetworkParams& net, GradStore& grads) {
  std::vector<ParamRef> refs;
  auto add_mat = [&refs](Matrix& p, Matrix& g, ParamKind k) {
    if (!p.empty()) refs.push_back({p.data.data(), g.data.data(), p.size(), k});
  };
  auto add_vec = [&refs](Vector& p, Vector& g, ParamKind k) {
    if (!p.empty()) refs.push_back({p.data(), g.data(), p.size(), k});
  };
  for (std::size_t t = 0; t < net.trunks.size(); ++t) {
    for (std::size_t l = 0; l < net.trunks[t].size(); ++l) {
      DenseLayerParams& p = net.trunks[t][l];
      LayerGrads& g = grads.trunks[t][l];
      if (p.constrained)
        add_mat(p.raw_z_weight, g.raw_z_weight, ParamKind::weight);
      else
        add_mat(p.free_weight, g.free_weight, ParamKind::weight);
      if (p.use_passthrough) add_mat(p.passthrough_weight, g.passthrough_weight, ParamKind::weight);
      if (p.bias_enabled) add_vec(p.bias, g.bias, ParamKind::bias);
      if (p.slope_trainable) add_vec(p.prelu_slope, g.prelu_slope, ParamKind::slope);
    }
  }
  if (is_recurrent(net.spec.kind)) {
    RecurrentParams& r = net.rec;
    RecurrentGrads& g = grads.rec;
    add_mat(r.u_in, g.u_in, ParamKind::weight);
    add_mat(r.z_rec, g.z_rec, ParamKind::weight);
    add_mat(r.m_out, g.m_out, ParamKind::weight);
    add_mat(r.d_in_prev, g.d_in_prev, ParamKind::weight);
    add_mat(r.n_rec_out, g.n_rec_out, ParamKind::weight);
    add_mat(r.v_in_out, g.v_in_out, ParamKind::weight);
    if (r.bias_enabled) {
      add_vec(r.bias_z, g.bias_z, ParamKind::bias);
      add_vec(r.bias_y, g.bias_y, ParamKind::bias);
    }
    if (r.slope_trainable) add_vec(r.prelu_slope, g.prelu_slope, ParamKind::slope);
  }
  return refs;
}

}  // namespace cdinn
