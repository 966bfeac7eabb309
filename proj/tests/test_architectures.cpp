#include <catch2/catch_amalgamated.hpp>

#include "cdinn/convex.hpp"
#include "cdinn/network.hpp"
#include "helpers/oracles.hpp"

using namespace cdinn;

TEST_CASE("build lays out the constraint pattern per kind") {
  SECTION("cdinn1: one trunk, unconstrained head") {
    NetworkSpec spec;
    spec.kind = NetKind::cdinn1;
    spec.input_dim = 2;
    spec.hidden_widths = {30};
    const NetworkParams net = build(spec);
    REQUIRE(net.trunks.size() == 1);
    REQUIRE(net.trunks[0].size() == 2);
    REQUIRE_FALSE(net.trunks[0][0].constrained);  // input map is free
    REQUIRE_FALSE(net.trunks[0].back().constrained);
    REQUIRE(net.trunks[0].back().free_weight.cols == 30);
  }
  SECTION("cdinn2: two disjoint trunks with nonnegative heads") {
    NetworkSpec spec;
    spec.kind = NetKind::cdinn2;
    spec.input_dim = 2;
    spec.hidden_widths = {15};
    const NetworkParams net = build(spec);
    REQUIRE(net.trunks.size() == 2);
    for (const auto& trunk : net.trunks) {
      REQUIRE(trunk.size() == 2);
      REQUIRE(trunk.back().constrained);
      REQUIRE(trunk.back().raw_z_weight.cols == 15);
    }
  }
  SECTION("standard: no constrained slot anywhere") {
    NetworkSpec spec;
    spec.kind = NetKind::standard;
    spec.input_dim = 2;
    spec.hidden_widths = {30};
    const NetworkParams net = build(spec);
    REQUIRE(net.trunks.size() == 1);
    for (const auto& layer : net.trunks[0]) {
      REQUIRE_FALSE(layer.constrained);
      REQUIRE_FALSE(layer.use_passthrough);
    }
  }
  SECTION("deep cdinn1 constrains every inner z-path") {
    NetworkSpec spec;
    spec.kind = NetKind::cdinn1;
    spec.input_dim = 3;
    spec.hidden_widths = {8, 6, 4};
    spec.passthrough_enabled = true;
    const NetworkParams net = build(spec);
    const auto& t = net.trunks[0];
    REQUIRE(t.size() == 4);
    REQUIRE_FALSE(t[0].constrained);
    REQUIRE_FALSE(t[0].use_passthrough);
    for (std::size_t l = 1; l < 3; ++l) {
      REQUIRE(t[l].constrained);
      REQUIRE(t[l].use_passthrough);
    }
    REQUIRE_FALSE(t[3].constrained);
    REQUIRE(t[3].use_passthrough);
  }
  SECTION("config errors") {
    NetworkSpec bad;
    bad.kind = NetKind::standard;
    bad.hidden_widths = {};
    REQUIRE_THROWS_AS(build(bad), std::invalid_argument);
    NetworkSpec bad2;
    bad2.kind = NetKind::recurrent_cdinn;
    bad2.hidden_widths = {4, 4};
    REQUIRE_THROWS_AS(build(bad2), std::invalid_argument);
  }
}

namespace {

// Hand-built cdinn1 with trunk [relu(x), relu(-x)] and head weights (1, -1):
// forward(x) = relu(x) - relu(-x) = x.
NetworkParams identity_via_dc() {
  NetworkParams net;
  net.spec.kind = NetKind::cdinn1;
  net.spec.input_dim = 1;
  net.spec.hidden_widths = {2};

  DenseLayerParams l0;
  l0.free_weight = Matrix::from_rows({{1.0}, {-1.0}});
  l0.bias = {0.0, 0.0};
  l0.prelu_slope = {0.0, 0.0};
  l0.activation = Activation::pc_relu;
  l0.slope_trainable = false;

  DenseLayerParams head;
  head.free_weight = Matrix::from_rows({{1.0, -1.0}});
  head.bias = {0.0};
  head.activation = Activation::linear;
  head.slope_trainable = false;

  net.trunks.push_back({l0, head});
  return net;
}

}  // namespace

TEST_CASE("cdinn1 realizes the identity as a difference of relus") {
  const NetworkParams net = identity_via_dc();
  for (double x : {-3.0, -0.4, 0.0, 0.5, 2.0}) REQUIRE(forward(net, {x}) == x);
}

TEST_CASE("all-zero parameters give the zero function") {
  NetworkSpec spec;
  spec.kind = NetKind::cdinn1;
  spec.input_dim = 2;
  spec.hidden_widths = {4};
  spec.rng_seed = 1;
  NetworkParams net = build(spec);
  GradStore g = make_grad_store(net);
  for (auto& r : trainable_refs(net, g))
    for (std::size_t i = 0; i < r.size; ++i)
      if (r.kind != ParamKind::slope) r.value[i] = 0.0;
  REQUIRE(forward(net, {0.3, -0.7}) == 0.0);
}

TEST_CASE("icnn without pass-through clips negative affine pieces to zero") {
  NetworkSpec spec;
  spec.kind = NetKind::icnn;
  spec.input_dim = 1;
  spec.hidden_widths = {1};
  spec.passthrough_enabled = false;
  spec.bias_enabled = false;
  NetworkParams net = build(spec);
  net.trunks[0][0].free_weight = Matrix::from_rows({{1.0}});
  const double y = forward(net, {-2.0});  // pre-activation is negative everywhere
  REQUIRE(y == 0.0);
}

TEST_CASE("dc_split sign-splits the cdinn1 head") {
  NetworkParams net;
  net.spec.kind = NetKind::cdinn1;
  net.spec.input_dim = 1;
  net.spec.hidden_widths = {3};
  DenseLayerParams l0;
  l0.free_weight = Matrix::from_rows({{1.0}, {0.5}, {-1.0}});
  l0.bias = {0.0, 0.0, 0.0};
  l0.prelu_slope = {0.0, 0.0, 0.0};
  l0.slope_trainable = false;
  DenseLayerParams head;
  head.free_weight = Matrix::from_rows({{2.0, -3.0, 0.0}});
  head.bias = {0.0};
  head.activation = Activation::linear;
  net.trunks.push_back({l0, head});

  const auto [f1, f2] = dc_split(net);
  REQUIRE(f1.output_weight == Vector{2.0, 0.0, 0.0});
  REQUIRE(f2.output_weight == Vector{0.0, 3.0, 0.0});
  REQUIRE(f1.trunk.get() == f2.trunk.get());  // shared trunk copy
}

TEST_CASE("dc_split of an icnn has a zero concave part") {
  NetworkSpec spec;
  spec.kind = NetKind::icnn;
  spec.input_dim = 2;
  spec.hidden_widths = {4};
  spec.passthrough_enabled = true;
  spec.rng_seed = 3;
  const NetworkParams net = build(spec);
  const auto [f1, f2] = dc_split(net);
  REQUIRE(f2.is_zero());
  REQUIRE(piece_eval(f2, {0.4, -0.2}) == 0.0);
  for (double v : piece_grad(f2, {0.4, -0.2})) REQUIRE(v == 0.0);
}

TEST_CASE("forward equals f1 - f2 on random inputs") {
  Rng rng(21);
  for (NetKind kind : {NetKind::cdinn1, NetKind::cdinn2, NetKind::icnn}) {
    NetworkSpec spec;
    spec.kind = kind;
    spec.input_dim = 2;
    spec.hidden_widths = {6};
    spec.rng_seed = 31 + static_cast<int>(kind);
    const NetworkParams net = build(spec);
    const auto [f1, f2] = dc_split(net);
    for (int i = 0; i < 100; ++i) {
      const Vector x = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
      const double direct = forward(net, x);
      const double split = piece_eval(f1, x) - piece_eval(f2, x);
      REQUIRE(std::abs(direct - split) < 1e-12);
    }
  }
}

TEST_CASE("dc_split covers single-hidden-layer standard nets and rejects deep ones") {
  NetworkSpec spec;
  spec.kind = NetKind::standard;
  spec.input_dim = 2;
  spec.hidden_widths = {5};
  spec.rng_seed = 8;
  const NetworkParams net = build(spec);
  const auto [f1, f2] = dc_split(net);
  Rng rng(9);
  for (int i = 0; i < 50; ++i) {
    const Vector x = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    REQUIRE(std::abs(forward(net, x) - (piece_eval(f1, x) - piece_eval(f2, x))) < 1e-12);
  }

  NetworkSpec deep = spec;
  deep.hidden_widths = {5, 5};
  REQUIRE_THROWS_AS(dc_split(build(deep)), std::invalid_argument);
}

TEST_CASE("max_affine_construct: absolute value and a single affine") {
  const NetworkParams abs_net = max_affine_construct({{{1.0}, 0.0}, {{-1.0}, 0.0}});
  REQUIRE(forward(abs_net, {-2.0}) == 2.0);
  REQUIRE(forward(abs_net, {0.0}) == 0.0);
  REQUIRE(forward(abs_net, {3.0}) == 3.0);

  const NetworkParams one = max_affine_construct({{{2.0}, 1.0}});
  for (double x : {-1.5, 0.0, 0.7}) REQUIRE(forward(one, {x}) == Catch::Approx(2 * x + 1));

  REQUIRE_THROWS_AS(max_affine_construct({}), std::invalid_argument);
}

TEST_CASE("max_affine_construct matches the direct max oracle") {
  Rng rng(55);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::pair<Vector, double>> affines;
    const std::size_t k = 3;
    for (std::size_t i = 0; i < k; ++i) {
      Vector a = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
      affines.push_back({a, rng.uniform(-1.0, 1.0)});
    }
    const NetworkParams net = max_affine_construct(affines);
    for (int p = 0; p < 1000; ++p) {
      const Vector x = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
      double direct = -1e300;
      for (const auto& [a, b] : affines) direct = std::max(direct, dot(a, x) + b);
      REQUIRE(std::abs(forward(net, x) - direct) < 1e-10);
    }
  }
}

TEST_CASE("icnn outputs and convex pieces are midpoint-convex") {
  Rng rng(77);
  NetworkSpec spec;
  spec.kind = NetKind::icnn;
  spec.input_dim = 2;
  spec.hidden_widths = {5, 4};
  spec.passthrough_enabled = true;
  spec.rng_seed = 13;
  const NetworkParams net = build(spec);
  const auto [f1, f2] = dc_split(net);

  NetworkSpec cspec;
  cspec.kind = NetKind::cdinn1;
  cspec.input_dim = 2;
  cspec.hidden_widths = {6};
  cspec.rng_seed = 14;
  const auto [g1, g2] = dc_split(build(cspec));

  for (const ConvexPiece* piece : {&f1, &g1, &g2}) {
    for (int i = 0; i < 1000; ++i) {
      const Vector x = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
      const Vector y = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
      const double lam = rng.uniform(0.0, 1.0);
      Vector mid(2);
      for (int j = 0; j < 2; ++j) mid[j] = lam * x[j] + (1 - lam) * y[j];
      const double lhs = piece_eval(*piece, mid);
      const double rhs = lam * piece_eval(*piece, x) + (1 - lam) * piece_eval(*piece, y);
      REQUIRE(lhs <= rhs + 1e-9);
    }
  }
}

TEST_CASE("training steps keep designated-nonnegative slots nonnegative") {
  NetworkSpec spec;
  spec.kind = NetKind::cdinn1;
  spec.input_dim = 2;
  spec.hidden_widths = {4, 3};
  spec.passthrough_enabled = false;
  spec.rng_seed = 6;
  NetworkParams net = build(spec);
  GradStore g = make_grad_store(net);
  auto refs = trainable_refs(net, g);
  AdamState st(total_size(refs), {0.05, 0.9, 0.999, 1e-8});
  Rng rng(61);
  for (int step = 0; step < 50; ++step) {
    for (auto& r : refs)
      for (std::size_t i = 0; i < r.size; ++i) r.grad[i] = rng.uniform(-1.0, 1.0);
    adam_step(st, refs);
  }
  for (const auto& layer : net.trunks[0]) {
    if (!layer.constrained) continue;
    const Matrix eff = layer.effective_z_weight();
    for (double w : eff.data) REQUIRE(w >= 0.0);
  }
}

TEST_CASE("unconstrained slots can be driven negative") {
  NetworkSpec spec;
  spec.kind = NetKind::cdinn1;
  spec.input_dim = 1;
  spec.hidden_widths = {3};
  spec.rng_seed = 2;
  NetworkParams net = build(spec);
  GradStore g = make_grad_store(net);
  auto refs = trainable_refs(net, g);
  AdamState st(total_size(refs), {0.1, 0.9, 0.999, 1e-8});
  for (int step = 0; step < 30; ++step) {
    for (auto& r : refs)
      for (std::size_t i = 0; i < r.size; ++i)
        r.grad[i] = (r.kind == ParamKind::weight) ? 1.0 : 0.0;
    adam_step(st, refs);
  }
  const Matrix& head = net.trunks[0].back().free_weight;
  bool any_negative = false;
  for (double w : head.data) any_negative |= (w < 0.0);
  REQUIRE(any_negative);
}
