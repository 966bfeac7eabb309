#pragma once

#include <vector>

#include "cdinn/network.hpp"

namespace cdinn {

namespace detail {

inline Vector expand_signed(const Vector& u) {
  Vector x(u.size() * 2);
  for (std::size_t i = 0; i < u.size(); ++i) {
    x[i] = u[i];
    x[u.size() + i] = -u[i];
  }
  return x;
}

inline void rec_matvec_add(const Matrix& w, bool constrained, const Vector& x, Vector& y) {
  if (w.empty()) return;
  if (constrained)
    matvec_squared_add(w, x, y);
  else
    matvec_add(w, x, y);
}

}  // namespace detail

struct RecurrentCache {
  std::vector<Vector> x;       // per step, after optional [u; -u] expansion
  std::vector<Vector> pre_z;   // per step
  std::vector<Vector> z;       // per step
  std::vector<Vector> pre_y;   // per step
  std::vector<double> y;
};

// Runs the recurrence from a zero initial hidden state and emits one scalar
// output per step.
inline std::vector<double> recurrent_forward_cached(const NetworkParams& net,
                                                    const std::vector<Vector>& inputs,
                                                    RecurrentCache& cache) {
  require(is_recurrent(net.spec.kind), "recurrent_forward: feedforward kind");
  require(!inputs.empty(), "recurrent_forward: empty input sequence");
  const RecurrentParams& r = net.rec;
  const std::size_t T = inputs.size();
  const std::size_t h = r.state_dim();

  cache.x.resize(T);
  cache.pre_z.assign(T, Vector());
  cache.z.assign(T, Vector());
  cache.pre_y.assign(T, Vector());
  cache.y.assign(T, 0.0);

  for (std::size_t t = 0; t < T; ++t) {
    require(inputs[t].size() == net.spec.input_dim, "recurrent_forward: input dim mismatch");
    cache.x[t] = r.expand_input ? detail::expand_signed(inputs[t]) : inputs[t];
  }

  Vector z_prev(h, 0.0);
  for (std::size_t t = 0; t < T; ++t) {
    Vector pre(h, 0.0);
    if (r.bias_enabled)
      for (std::size_t i = 0; i < h; ++i) pre[i] = r.bias_z[i];
    detail::rec_matvec_add(r.u_in, r.u_constrained, cache.x[t], pre);
    detail::rec_matvec_add(r.z_rec, true, z_prev, pre);
    if (r.passthroughs && t > 0) detail::rec_matvec_add(r.d_in_prev, true, cache.x[t - 1], pre);

    Vector z(h);
    for (std::size_t i = 0; i < h; ++i) z[i] = std::max(r.prelu_slope[i] * pre[i], pre[i]);

    Vector pre_y(1, r.bias_enabled ? r.bias_y[0] : 0.0);
    detail::rec_matvec_add(r.m_out, r.m_constrained, z, pre_y);
    if (r.passthroughs) {
      detail::rec_matvec_add(r.n_rec_out, true, z_prev, pre_y);
      detail::rec_matvec_add(r.v_in_out, true, cache.x[t], pre_y);
    }
    cache.pre_z[t] = std::move(pre);
    cache.z[t] = z;
    cache.pre_y[t] = pre_y;
    cache.y[t] = r.relu_output ? std::max(0.0, pre_y[0]) : pre_y[0];
    z_prev = std::move(z);
  }
  return cache.y;
}

inline std::vector<double> recurrent_forward(const NetworkParams& net,
                                             const std::vector<Vector>& inputs) {
  RecurrentCache cache;
  auto y = recurrent_forward_cached(net, inputs, cache);
  for (double v : y)
    if (!std::isfinite(v)) throw std::runtime_error("recurrent_forward: non-finite output");
  return y;
}

// Scalar-signal convenience wrapper.
inline std::vector<double> recurrent_forward(const NetworkParams& net, const Vector& signal) {
  std::vector<Vector> inputs(signal.size());
  for (std::size_t t = 0; t < signal.size(); ++t) inputs[t] = Vector{signal[t]};
  return recurrent_forward(net, inputs);
}

// Backpropagation through time.  `dy[t]` is the upstream gradient on y_t;
// parameter gradients accumulate into `grads`.
inline void recurrent_backward_cached(const NetworkParams& net, const RecurrentCache& cache,
                                      const std::vector<double>& dy, GradStore& grads) {
  const RecurrentParams& r = net.rec;
  RecurrentGrads& g = grads.rec;
  const std::size_t T = cache.y.size();
  const std::size_t h = r.state_dim();
  require(dy.size() == T, "recurrent_backward: dy length mismatch");

  auto weight_row_backward = [](const Matrix& w, bool constrained, Matrix& gw, double d,
                                const Vector& in, Vector* d_in) {
    // Scalar-output maps: row 0 only.
    const double* row = w.row_ptr(0);
    double* grow = gw.row_ptr(0);
    for (std::size_t j = 0; j < w.cols; ++j) {
      if (constrained) {
        grow[j] += d * 2.0 * row[j] * in[j];
        if (d_in) (*d_in)[j] += d * row[j] * row[j];
      } else {
        grow[j] += d * in[j];
        if (d_in) (*d_in)[j] += d * row[j];
      }
    }
  };

  Vector dz_next(h, 0.0);  // dL/dz_t flowing backward through the recurrence
  for (std::size_t t = T; t-- > 0;) {
    double d_out = dy[t];
    if (r.relu_output && cache.pre_y[t][0] < 0.0) d_out = 0.0;
    if (r.bias_enabled) g.bias_y[0] += d_out;

    Vector dz = dz_next;
    weight_row_backward(r.m_out, r.m_constrained, g.m_out, d_out, cache.z[t], &dz);
    if (r.passthroughs) {
      // V x_t term.
      const double* vrow = r.v_in_out.row_ptr(0);
      double* gvrow = g.v_in_out.row_ptr(0);
      for (std::size_t j = 0; j < r.v_in_out.cols; ++j)
        gvrow[j] += d_out * 2.0 * vrow[j] * cache.x[t][j];
      // N z_{t-1} contributes to the previous step's dz; handled below.
    }

    // Through the state activation.
    Vector dpre(h);
    for (std::size_t i = 0; i < h; ++i) {
      const double s = cache.pre_z[t][i];
      if (r.slope_trainable && s < 0.0) g.prelu_slope[i] += dz[i] * s;
      dpre[i] = dz[i] * pc_relu_deriv(s, r.prelu_slope[i]);
      if (r.bias_enabled) g.bias_z[i] += dpre[i];
    }

    // U x_t.
    for (std::size_t i = 0; i < h; ++i) {
      const double d = dpre[i];
      const double* row = r.u_in.row_ptr(i);
      double* grow = g.u_in.row_ptr(i);
      for (std::size_t j = 0; j < r.u_in.cols; ++j)
        grow[j] += r.u_constrained ? d * 2.0 * row[j] * cache.x[t][j] : d * cache.x[t][j];
    }
    // D x_{t-1}.
    if (r.passthroughs && t > 0) {
      for (std::size_t i = 0; i < h; ++i) {
        const double d = dpre[i];
        const double* row = r.d_in_prev.row_ptr(i);
        double* grow = g.d_in_prev.row_ptr(i);
        for (std::size_t j = 0; j < r.d_in_prev.cols; ++j)
          grow[j] += d * 2.0 * row[j] * cache.x[t - 1][j];
      }
    }

    // Z z_{t-1}: gradient and the recurrent contribution to dz_{t-1}.
    dz_next.assign(h, 0.0);
    if (t > 0) {
      const Vector& z_prev = cache.z[t - 1];
      for (std::size_t i = 0; i < h; ++i) {
        const double d = dpre[i];
        const double* row = r.z_rec.row_ptr(i);
        double* grow = g.z_rec.row_ptr(i);
        for (std::size_t j = 0; j < h; ++j) {
          grow[j] += d * 2.0 * row[j] * z_prev[j];
          dz_next[j] += d * row[j] * row[j];
        }
      }
      if (r.passthroughs) {
        // y_t's N z_{t-1} term.
        const double* nrow = r.n_rec_out.row_ptr(0);
        double* gnrow = g.n_rec_out.row_ptr(0);
        double d_out_t = dy[t];
        if (r.relu_output && cache.pre_y[t][0] < 0.0) d_out_t = 0.0;
        for (std::size_t j = 0; j < h; ++j) {
          gnrow[j] += d_out_t * 2.0 * nrow[j] * z_prev[j];
          dz_next[j] += d_out_t * nrow[j] * nrow[j];
        }
      }
    }
  }
}

// Exact shift register realizing y_t = u_{t-m} with a recurrent_cdinn cell:
// 2(m+1) hidden units carry relu(u) and relu(-u) chains and the head reads
// the oldest pair with weights (+1, -1).
inline NetworkParams delay_construct(std::size_t m, std::size_t input_dim = 1) {
  require(input_dim == 1, "delay_construct: scalar signals only");
  NetworkParams net;
  net.spec.kind = NetKind::recurrent_cdinn;
  net.spec.input_dim = 1;
  net.spec.output_dim = 1;
  net.spec.bias_enabled = false;
  net.spec.activation = HiddenActivation::relu;
  const std::size_t h = 2 * (m + 1);
  net.spec.hidden_widths = {h};

  RecurrentParams& r = net.rec;
  r.u_constrained = false;
  r.m_constrained = false;
  r.passthroughs = false;
  r.bias_enabled = false;
  r.slope_trainable = false;
  r.expand_input = false;
  // Units 2k / 2k+1 hold relu(u_{t-k}) / relu(-u_{t-k}).
  r.u_in = Matrix(h, 1, 0.0);
  r.u_in(0, 0) = 1.0;
  r.u_in(1, 0) = -1.0;
  r.z_rec = Matrix(h, h, 0.0);
  for (std::size_t k = 1; k <= m; ++k) {
    r.z_rec(2 * k, 2 * (k - 1)) = 1.0;      // raw 1 -> effective 1
    r.z_rec(2 * k + 1, 2 * (k - 1) + 1) = 1.0;
  }
  r.m_out = Matrix(1, h, 0.0);
  r.m_out(0, 2 * m) = 1.0;
  r.m_out(0, 2 * m + 1) = -1.0;
  r.bias_z.assign(h, 0.0);
  r.bias_y.assign(1, 0.0);
  r.prelu_slope.assign(h, 0.0);
  return net;
}

}  // namespace cdinn
