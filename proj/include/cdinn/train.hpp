#pragma once

#include <string>

#include "cdinn/dataset.hpp"
#include "cdinn/network.hpp"
#include "cdinn/recurrent.hpp"

namespace cdinn {

struct TrainConfig {
  std::size_t epochs = 800;
  double lr = 1e-2;
  std::uint64_t seed = 0;  // consumed by restart builders, not by the loop itself
  int restarts = 3;
};

struct TrainResult {
  NetworkParams net;
  double final_mse = 0.0;
};

struct TrainDivergedError : std::runtime_error {
  std::size_t epoch;
  explicit TrainDivergedError(std::size_t ep)
      : std::runtime_error("training diverged (non-finite loss) at epoch " + std::to_string(ep)),
        epoch(ep) {}
};

inline double mse(const NetworkParams& net, const Dataset& ds) {
  double loss = 0.0;
  std::size_t count = 0;
  if (ds.sequences) {
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const auto y = recurrent_forward(net, ds.input_row(i));
      for (std::size_t t = 0; t < y.size(); ++t) {
        const double e = y[t] - ds.targets(i, t);
        loss += e * e;
        ++count;
      }
    }
  } else {
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const double e = forward(net, ds.input_row(i)) - ds.targets(i, 0);
      loss += e * e;
      ++count;
    }
  }
  return loss / double(count);
}

// Full-batch MSE descent with Adam. Deterministic: fixed sample order, one
// optimizer step per epoch. Throws TrainDivergedError if the loss goes
// non-finite, recording the epoch.
inline TrainResult train(NetworkParams net, const Dataset& ds, const TrainConfig& cfg) {
  require(ds.size() >= 1, "train: empty dataset");
  const bool seq = ds.sequences;
  if (seq)
    require(is_recurrent(net.spec.kind), "train: sequence data needs a recurrent architecture");
  else
    require(!is_recurrent(net.spec.kind), "train: pointwise data needs a feedforward architecture");
  if (!seq)
    require(ds.inputs.cols == net.spec.input_dim, "train: input width mismatch");

  GradStore grads = make_grad_store(net);
  const auto refs = trainable_refs(net, grads);
  AdamState adam(total_size(refs), {cfg.lr, 0.9, 0.999, 1e-8});

  ForwardCache cache;
  RecurrentCache rcache;
  Vector x;
  std::vector<Vector> xs;
  std::vector<double> dy;

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    grads.zero();
    double loss = 0.0;
    if (seq) {
      const std::size_t T = ds.inputs.cols;
      const double scale = 2.0 / double(ds.size() * T);
      xs.resize(T);
      dy.resize(T);
      for (std::size_t i = 0; i < ds.size(); ++i) {
        for (std::size_t t = 0; t < T; ++t) xs[t] = Vector{ds.inputs(i, t)};
        const auto y = recurrent_forward_cached(net, xs, rcache);
        for (std::size_t t = 0; t < T; ++t) {
          const double e = y[t] - ds.targets(i, t);
          loss += e * e;
          dy[t] = scale * e;
        }
        recurrent_backward_cached(net, rcache, dy, grads);
      }
      loss /= double(ds.size() * T);
    } else {
      const double scale = 2.0 / double(ds.size());
      x.resize(ds.inputs.cols);
      for (std::size_t i = 0; i < ds.size(); ++i) {
        for (std::size_t j = 0; j < ds.inputs.cols; ++j) x[j] = ds.inputs(i, j);
        const double y = forward_cached(net, x, cache);
        const double e = y - ds.targets(i, 0);
        loss += e * e;
        backward_cached(net, x, cache, scale * e, grads);
      }
      loss /= double(ds.size());
    }
    if (!std::isfinite(loss)) throw TrainDivergedError(epoch);
    adam_step(adam, refs);
  }

  TrainResult result;
  result.final_mse = mse(net, ds);
  result.net = std::move(net);
  return result;
}

// Builds and trains `cfg.restarts` networks from consecutive seeds. Callers
// pick a winner by their own criterion (fit, or downstream optimization).
inline std::vector<TrainResult> train_restarts(NetworkSpec spec, const Dataset& ds,
                                               const TrainConfig& cfg) {
  std::vector<TrainResult> runs;
  for (int r = 0; r < cfg.restarts; ++r) {
    spec.rng_seed = cfg.seed + std::uint64_t(r);
    runs.push_back(train(build(spec), ds, cfg));
  }
  return runs;
}

inline const TrainResult& best_fit(const std::vector<TrainResult>& runs) {
  require(!runs.empty(), "best_fit: no runs");
  std::size_t bi = 0;
  for (std::size_t i = 1; i < runs.size(); ++i)
    if (runs[i].final_mse < runs[bi].final_mse) bi = i;
  return runs[bi];
}

}  // namespace cdinn
