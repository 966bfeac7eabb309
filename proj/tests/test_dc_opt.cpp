#include <catch2/catch_amalgamated.hpp>

#include "cdinn/convex.hpp"
#include "cdinn/epigraph.hpp"
#include "cdinn/optimize.hpp"
#include "helpers/oracles.hpp"

using namespace cdinn;

namespace {

ConvexPiece abs_piece() {
  const NetworkParams net = max_affine_construct({{{1.0}, 0.0}, {{-1.0}, 0.0}});
  return dc_split(net).first;
}

// Hand-built cdinn1 encoding f(x) = |x| - |x - 0.5|.
NetworkParams abs_minus_shifted_abs() {
  NetworkParams net;
  net.spec.kind = NetKind::cdinn1;
  net.spec.input_dim = 1;
  net.spec.hidden_widths = {4};
  DenseLayerParams l0;
  l0.free_weight = Matrix::from_rows({{1.0}, {-1.0}, {1.0}, {-1.0}});
  l0.bias = {0.0, 0.0, -0.5, 0.5};
  l0.prelu_slope = {0.0, 0.0, 0.0, 0.0};
  l0.slope_trainable = false;
  DenseLayerParams head;
  head.free_weight = Matrix::from_rows({{1.0, 1.0, -1.0, -1.0}});
  head.bias = {0.0};
  head.bias_enabled = false;
  head.activation = Activation::linear;
  net.trunks.push_back({l0, head});
  return net;
}

}  // namespace

TEST_CASE("constraint sets validate feasibility at construction") {
  REQUIRE_NOTHROW(ConstraintSet::make({-1.0, -1.0}, {1.0, 1.0},
                                      Matrix::from_rows({{1.0, 1.0}}), {0.5}));
  // Box [0,1]^2 with x1 + x2 <= -1 is empty.
  REQUIRE_THROWS_AS(
      ConstraintSet::make({0.0, 0.0}, {1.0, 1.0}, Matrix::from_rows({{1.0, 1.0}}), {-1.0}),
      std::invalid_argument);
}

TEST_CASE("epigraph LP of |x| over [-1,1] has optimum zero") {
  const auto cons = ConstraintSet::box({-1.0}, {1.0});
  const LpProblem lp = epigraph_lp(abs_piece(), {0.0}, 0.0, cons);
  const LpSolution s = solve_lp(lp);
  REQUIRE(s.status == LpStatus::optimal);
  REQUIRE(s.value == Catch::Approx(0.0).margin(1e-9));
  REQUIRE(s.x[0] == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("epigraph LP of |x| with a linear tilt matches the grid oracle") {
  const auto cons = ConstraintSet::box({-1.0}, {1.0});
  const ConvexPiece piece = abs_piece();
  const LpProblem lp = epigraph_lp(piece, {-0.5}, 0.0, cons);
  const LpSolution s = solve_lp(lp);
  REQUIRE(s.status == LpStatus::optimal);
  // min over [-1, 1] of |x| - 0.5 x: candidates {-1, 0, 1} give {1.5, 0, 0.5}.
  REQUIRE(s.value == Catch::Approx(0.0).margin(1e-9));
  REQUIRE(s.x[0] == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("epigraph LP is tight against a dense grid for a 2-input icnn") {
  NetworkSpec spec;
  spec.kind = NetKind::icnn;
  spec.input_dim = 2;
  spec.hidden_widths = {6, 4};
  spec.passthrough_enabled = true;
  spec.rng_seed = 19;
  const NetworkParams net = build(spec);
  const ConvexPiece piece = dc_split(net).first;
  const auto cons = ConstraintSet::box({-1.0, -1.0}, {1.0, 1.0});

  const LpProblem lp = epigraph_lp(piece, {0.0, 0.0}, 0.0, cons);
  const LpSolution s = solve_lp(lp);
  REQUIRE(s.status == LpStatus::optimal);

  const std::size_t n = 401;
  auto [gx, gmin] = oracles::grid_min([&](const Vector& x) { return piece_eval(piece, x); },
                                      cons.box_lo, cons.box_hi, n);
  const double h = 2.0 / double(n - 1);
  // Empirical Lipschitz bound along the axes, summed.
  double lip = 0.0;
  for (int axis = 0; axis < 2; ++axis) {
    double worst = 0.0;
    for (double other = -1.0; other <= 1.0; other += 0.25) {
      double prev = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double c = -1.0 + h * double(i);
        const Vector x = axis == 0 ? Vector{c, other} : Vector{other, c};
        const double v = piece_eval(piece, x);
        if (i > 0) worst = std::max(worst, std::abs(v - prev) / h);
        prev = v;
      }
    }
    lip += worst;
  }
  REQUIRE(s.value <= gmin + 1e-7);
  REQUIRE(gmin - s.value <= lip * h + 1e-7);
}

TEST_CASE("linearize_concave is tangent at the expansion point") {
  const ConvexPiece f2 = abs_piece();
  const auto [slope, offset] = linearize_concave(f2, {2.0});
  REQUIRE(slope.size() == 1);
  REQUIRE(slope[0] == Catch::Approx(-1.0));
  // surrogate contribution at x0 equals -f2(x0): q*x0 + r = -f2(x0).
  REQUIRE(slope[0] * 2.0 + offset == Catch::Approx(-piece_eval(f2, {2.0})).margin(1e-12));
}

TEST_CASE("linearize_concave majorizes the negated piece everywhere") {
  NetworkSpec spec;
  spec.kind = NetKind::icnn;
  spec.input_dim = 2;
  spec.hidden_widths = {5};
  spec.rng_seed = 23;
  const ConvexPiece f2 = dc_split(build(spec)).first;
  Rng rng(29);
  for (int rep = 0; rep < 10; ++rep) {
    const Vector x0 = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    const auto [slope, offset] = linearize_concave(f2, x0);
    for (int i = 0; i < 100; ++i) {
      const Vector x = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
      // q.x + r >= -f2(x) (tangent of a concave function lies above it).
      REQUIRE(dot(slope, x) + offset >= -piece_eval(f2, x) - 1e-9);
    }
  }
}

TEST_CASE("linearize_concave of the zero piece is zero") {
  ConvexPiece zero;
  zero.input_dim = 2;
  const auto [slope, offset] = linearize_concave(zero, {0.3, 0.4});
  REQUIRE(slope == Vector{0.0, 0.0});
  REQUIRE(offset == 0.0);
}

TEST_CASE("ccp on a purely convex objective converges in one LP solve") {
  const NetworkParams net = max_affine_construct({{{1.0}, 0.0}, {{-1.0}, 0.0}});
  CcpConfig cfg;
  cfg.x0 = {0.7};
  cfg.tolerance = 1e-3;
  const OptimTrace trace = ccp_optimize(net, ConstraintSet::box({-1.0}, {1.0}), cfg);
  REQUIRE(trace.termination == TermReason::converged);
  REQUIRE(trace.iterates.size() <= 3);  // start + at most two solves
  REQUIRE(trace.last().objective == Catch::Approx(0.0).margin(1e-9));
  REQUIRE(trace.last().x[0] == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("ccp descends on |x| - |x - 0.5| and lands on the flat minimum") {
  const NetworkParams net = abs_minus_shifted_abs();
  CcpConfig cfg;
  cfg.x0 = {-0.8};
  cfg.tolerance = 1e-5;
  const OptimTrace trace = ccp_optimize(net, ConstraintSet::box({-1.0}, {1.0}), cfg);
  REQUIRE(trace.termination == TermReason::converged);
  REQUIRE(trace.last().objective == Catch::Approx(-0.5).margin(1e-9));
  for (std::size_t k = 1; k < trace.iterates.size(); ++k)
    REQUIRE(trace.iterates[k].objective <= trace.iterates[k - 1].objective + 1e-7);
  // Surrogate value majorizes the true objective at the accepted iterate.
  for (std::size_t k = 1; k < trace.iterates.size(); ++k)
    REQUIRE(*trace.iterates[k].surrogate >= trace.iterates[k].objective - 1e-9);
}

TEST_CASE("ccp rejects infeasible starting points") {
  const NetworkParams net = abs_minus_shifted_abs();
  CcpConfig cfg;
  cfg.x0 = {2.0};
  REQUIRE_THROWS_AS(ccp_optimize(net, ConstraintSet::box({-1.0}, {1.0}), cfg),
                    std::invalid_argument);
}

TEST_CASE("ccp respects affine constraints") {
  const NetworkParams net = abs_minus_shifted_abs();
  // Feasible set x >= 0.25 keeps the flat minimum out of reach.
  const auto cons =
      ConstraintSet::make({-1.0}, {1.0}, Matrix::from_rows({{-1.0}}), {-0.25});
  CcpConfig cfg;
  cfg.x0 = {0.9};
  cfg.tolerance = 1e-6;
  const OptimTrace trace = ccp_optimize(net, cons, cfg);
  for (const auto& it : trace.iterates) REQUIRE(it.x[0] >= 0.25 - 1e-8);
  // True restricted minimum: f(0.25) = 0.25 - 0.25 = 0... f is 2x-0.5 on [0, 0.5].
  REQUIRE(trace.last().objective == Catch::Approx(0.0).margin(1e-8));
}

TEST_CASE("filtered subgradient descent walks a convex bowl down") {
  const NetworkParams net = max_affine_construct({{{1.0}, 0.0}, {{-1.0}, 0.0}});
  SubgradConfig cfg;
  cfg.alpha0 = 0.01;
  cfg.beta = 0.0;
  cfg.schedule = StepSchedule::constant;
  cfg.max_iterations = 200;
  cfg.tolerance = 1e-12;
  cfg.x0 = {0.5};
  const OptimTrace trace = filtered_subgrad(net, ConstraintSet::box({-1.0}, {1.0}), cfg);
  REQUIRE(std::abs(trace.best().x[0]) < 0.02);
  // Monotone until the iterates start oscillating in the kink's step-size band.
  for (std::size_t k = 1; k + 1 < trace.iterates.size(); ++k) {
    if (std::abs(trace.iterates[k].x[0]) > 0.02)
      REQUIRE(trace.iterates[k].objective <= trace.iterates[k - 1].objective + 1e-12);
  }
}

TEST_CASE("subgradient iterates stay inside the box and honor over_k steps") {
  const NetworkParams net = max_affine_construct({{{1.0}, 0.0}, {{-1.0}, 0.0}});
  SubgradConfig cfg;
  cfg.alpha0 = 5.0;
  cfg.beta = 0.25;
  cfg.schedule = StepSchedule::over_k;
  cfg.max_iterations = 50;
  cfg.tolerance = 0.0;
  REQUIRE_THROWS_AS([&] {
    SubgradConfig bad = cfg;
    bad.tolerance = 1e-3;
    bad.x0 = {0.5};
    bad.beta = 1.0;
    return filtered_subgrad(net, ConstraintSet::box({-1.0}, {1.0}), bad);
  }(), std::invalid_argument);

  cfg.tolerance = 1e-9;
  cfg.x0 = {0.5};
  const OptimTrace trace = filtered_subgrad(net, ConstraintSet::box({-1.0}, {1.0}), cfg);
  for (std::size_t k = 0; k < trace.iterates.size(); ++k) {
    REQUIRE(trace.iterates[k].x[0] >= -1.0);
    REQUIRE(trace.iterates[k].x[0] <= 1.0);
    if (k >= 2) {
      const double expect = 5.0 / double(k);
      REQUIRE(trace.iterates[k].alpha == Catch::Approx(expect));
    }
  }
}

TEST_CASE("maximize flag climbs instead of descending") {
  const NetworkParams net = max_affine_construct({{{1.0}, 0.0}, {{-1.0}, 0.0}});
  SubgradConfig cfg;
  cfg.alpha0 = 0.05;
  cfg.beta = 0.0;
  cfg.max_iterations = 100;
  cfg.tolerance = 1e-12;
  cfg.x0 = {0.2};
  const OptimTrace trace =
      filtered_subgrad(net, ConstraintSet::box({-1.0}, {1.0}), cfg, /*maximize=*/true);
  REQUIRE(trace.last().objective == Catch::Approx(1.0).margin(1e-9));  // |x| maxed at the box edge
}
