#pragma once

#include <chrono>
#include <optional>
#include <string>

#include "cdinn/epigraph.hpp"
#include "cdinn/network.hpp"

namespace cdinn {

enum class TermReason { converged, max_iter, lp_failure };

inline const char* to_string(TermReason r) {
  switch (r) {
    case TermReason::converged: return "converged";
    case TermReason::max_iter: return "max_iter";
    case TermReason::lp_failure: return "lp_failure";
  }
  return "?";
}

struct IterRecord {
  Vector x;
  double objective = 0.0;                  // network output at x
  std::optional<double> surrogate;         // LP optimum of the convexified step
  std::optional<LpStatus> lp_status;
  double alpha = 0.0;                      // subgradient step size, 0 for CCP
};

struct OptimTrace {
  std::vector<IterRecord> iterates;  // index 0 is the starting point
  TermReason termination = TermReason::max_iter;
  double seconds = 0.0;

  const IterRecord& best() const {
    std::size_t bi = 0;
    for (std::size_t i = 1; i < iterates.size(); ++i)
      if (iterates[i].objective < iterates[bi].objective) bi = i;
    return iterates[bi];
  }
  const IterRecord& last() const { return iterates.back(); }
};

struct CcpConfig {
  std::size_t max_iterations = 200;  // paper protocol also uses 500
  double tolerance = 1e-3;           // |f(x_{k+1}) - f(x_k)| threshold; or 1e-5
  Vector x0;
};

// Convex-concave procedure on the DC split of `net`: at each iterate the
// concave half is replaced by its tangent and the resulting polyhedral convex
// program is solved exactly as one LP. The true objective can never increase
// because the surrogate majorizes it and touches it at the expansion point.
inline OptimTrace ccp_optimize(const NetworkParams& net, const ConstraintSet& cons,
                               const CcpConfig& cfg) {
  require(cfg.tolerance > 0.0, "ccp_optimize: tolerance must be positive");
  require(cfg.x0.size() == cons.dim() && cons.dim() == net.spec.input_dim,
          "ccp_optimize: dimension mismatch");
  require(cons.contains(cfg.x0), "ccp_optimize: infeasible starting point");

  const auto t_start = std::chrono::steady_clock::now();
  auto [f1, f2] = dc_split(net);

  OptimTrace trace;
  Vector x = cfg.x0;
  double fx = forward(net, x);
  trace.iterates.push_back({x, fx, std::nullopt, std::nullopt, 0.0});
  trace.termination = TermReason::max_iter;

  for (std::size_t k = 0; k < cfg.max_iterations; ++k) {
    auto [slope, offset] = linearize_concave(f2, x);
    const LpProblem lp = epigraph_lp(f1, slope, offset, cons);
    const LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::optimal) {
      trace.termination = TermReason::lp_failure;
      trace.iterates.back().lp_status = sol.status;
      break;
    }
    Vector x_next(sol.x.begin(), sol.x.begin() + cons.dim());
    const double f_next = forward(net, x_next);
    trace.iterates.push_back({x_next, f_next, sol.value, sol.status, 0.0});
    const double delta = std::abs(f_next - fx);
    x = std::move(x_next);
    fx = f_next;
    if (delta < cfg.tolerance) {
      trace.termination = TermReason::converged;
      break;
    }
  }
  trace.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return trace;
}

enum class StepSchedule { constant, over_k };

inline const char* to_string(StepSchedule s) {
  return s == StepSchedule::constant ? "const" : "over_k";
}

struct SubgradConfig {
  double alpha0 = 0.1;
  StepSchedule schedule = StepSchedule::constant;
  double beta = 0.25;
  std::size_t max_iterations = 200;
  double tolerance = 1e-3;
  Vector x0;
};

// Filtered-beta (sub-)gradient descent baseline:
//   s_k = (1 - beta) g_k + beta s_{k-1},  x_{k+1} = x_k - alpha_k s_k,
// with g_k the network's input gradient. Iterates are clipped to the box
// (affine constraint handling stays with the CCP path). `maximize` flips the
// gradient sign.
inline OptimTrace filtered_subgrad(const NetworkParams& net, const ConstraintSet& cons,
                                   const SubgradConfig& cfg, bool maximize = false) {
  require(cfg.alpha0 > 0.0, "filtered_subgrad: alpha0 must be positive");
  require(cfg.beta >= 0.0 && cfg.beta < 1.0, "filtered_subgrad: beta outside [0,1)");
  require(cfg.x0.size() == cons.dim() && cons.dim() == net.spec.input_dim,
          "filtered_subgrad: dimension mismatch");
  require(cons.contains(cfg.x0), "filtered_subgrad: infeasible starting point");

  const auto t_start = std::chrono::steady_clock::now();
  OptimTrace trace;
  Vector x = cons.clip_to_box(cfg.x0);
  double fx = forward(net, x);
  trace.iterates.push_back({x, fx, std::nullopt, std::nullopt, 0.0});
  trace.termination = TermReason::max_iter;

  ForwardCache cache;
  GradStore grads = make_grad_store(net);
  Vector s(cons.dim(), 0.0);

  for (std::size_t k = 1; k <= cfg.max_iterations; ++k) {
    grads.zero();
    forward_cached(net, x, cache);
    backward_cached(net, x, cache, 1.0, grads);
    const double alpha =
        cfg.schedule == StepSchedule::constant ? cfg.alpha0 : cfg.alpha0 / static_cast<double>(k);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double g = maximize ? -grads.input_grad[i] : grads.input_grad[i];
      s[i] = (1.0 - cfg.beta) * g + cfg.beta * s[i];
      x[i] -= alpha * s[i];
    }
    x = cons.clip_to_box(std::move(x));
    const double f_next = forward(net, x);
    trace.iterates.push_back({x, f_next, std::nullopt, std::nullopt, alpha});
    const double delta = std::abs(f_next - fx);
    fx = f_next;
    if (delta < cfg.tolerance) {
      trace.termination = TermReason::converged;
      break;
    }
  }
  trace.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return trace;
}

}  // namespace cdinn
