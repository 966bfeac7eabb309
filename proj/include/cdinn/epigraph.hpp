#pragma once

#include <utility>

#include "cdinn/constraints.hpp"
#include "cdinn/convex.hpp"
#include "cdinn/simplex.hpp"

namespace cdinn {

// First-order expansion of -f2 around x0, returned as (slope q, offset r) so
// that  piece1(x) + q.x + r  majorizes  piece1(x) - f2(x)  with equality at x0.
inline std::pair<Vector, double> linearize_concave(const ConvexPiece& f2, const Vector& x0) {
  require_finite(x0, "linearize_concave: x0");
  if (f2.is_zero()) return {Vector(x0.size(), 0.0), 0.0};
  const Vector g = piece_grad(f2, x0);
  Vector slope(x0.size());
  for (std::size_t i = 0; i < x0.size(); ++i) slope[i] = -g[i];
  const double offset = -piece_eval(f2, x0) + dot(g, x0);
  return {slope, offset};
}

// Epigraph LP for  min_{x in cons}  piece(x) + q.x + r.
//
// One free variable per hidden unit bounds its activation from above:
//   t >= s  and  t >= a*s,   s = affine(pre-activation in x and previous t's).
// Nonnegative downstream weights pull every t down to max(s, a*s) at the
// optimum, so the LP value equals the exact minimum of the piecewise-linear
// objective — polynomial size instead of enumerating affine pieces.
inline LpProblem epigraph_lp(const ConvexPiece& piece, const Vector& lin_slope,
                             double lin_offset, const ConstraintSet& cons) {
  const std::size_t d = cons.dim();
  require(piece.is_zero() || piece.input_dim == d, "epigraph_lp: dimension mismatch");
  require(lin_slope.size() == d, "epigraph_lp: linear term dimension mismatch");

  const auto& trunk = piece.trunk ? *piece.trunk : detail::empty_trunk();
  for (const auto& layer : trunk)
    require(layer.activation == Activation::pc_relu, "epigraph_lp: activation not supported");
  for (double c : piece.output_weight)
    require(c >= 0.0, "epigraph_lp: piece readout must be nonnegative");

  // Variable layout: x (d vars), then units layer by layer.
  std::vector<std::size_t> layer_base(trunk.size());
  std::size_t nv = d;
  const bool has_units = !piece.output_weight.empty() && !trunk.empty();
  if (has_units)
    for (std::size_t l = 0; l < trunk.size(); ++l) {
      layer_base[l] = nv;
      nv += trunk[l].out_dim();
    }

  LpProblem p;
  p.objective.assign(nv, 0.0);
  p.lower.assign(nv, -kInf);
  p.upper.assign(nv, kInf);
  p.names.resize(nv);
  for (std::size_t j = 0; j < d; ++j) {
    p.lower[j] = cons.box_lo[j];
    p.upper[j] = cons.box_hi[j];
    p.names[j] = "x" + std::to_string(j);
  }

  std::size_t n_rows = cons.affine_lhs.rows;
  if (has_units)
    for (const auto& layer : trunk) n_rows += 2 * layer.out_dim();
  p.ineq_matrix = Matrix(n_rows, nv, 0.0);
  p.ineq_rhs.assign(n_rows, 0.0);

  std::size_t row = 0;
  for (std::size_t r = 0; r < cons.affine_lhs.rows; ++r, ++row) {
    for (std::size_t j = 0; j < d; ++j) p.ineq_matrix(row, j) = cons.affine_lhs(r, j);
    p.ineq_rhs[row] = cons.affine_rhs[r];
  }

  if (has_units) {
    for (std::size_t l = 0; l < trunk.size(); ++l) {
      const DenseLayerParams& layer = trunk[l];
      const Matrix w = layer.effective_z_weight();
      for (std::size_t i = 0; i < layer.out_dim(); ++i) {
        const std::size_t ti = layer_base[l] + i;
        p.names[ti] = "t" + std::to_string(l) + "_" + std::to_string(i);
        const double bias = layer.bias_enabled ? layer.bias[i] : 0.0;
        const double a = layer.prelu_slope[i];
        // Two rows: s - t <= 0 and a*s - t <= 0.
        for (int branch = 0; branch < 2; ++branch, ++row) {
          const double f = branch == 0 ? 1.0 : a;
          for (std::size_t j = 0; j < w.cols; ++j) {
            const std::size_t cj = (l == 0) ? j : layer_base[l - 1] + j;
            p.ineq_matrix(row, cj) += f * w(i, j);
          }
          if (layer.use_passthrough)
            for (std::size_t j = 0; j < d; ++j)
              p.ineq_matrix(row, j) += f * layer.passthrough_weight(i, j);
          p.ineq_matrix(row, ti) = -1.0;
          p.ineq_rhs[row] = -f * bias;
        }
      }
    }
    const std::size_t last = trunk.size() - 1;
    for (std::size_t i = 0; i < trunk[last].out_dim(); ++i)
      p.objective[layer_base[last] + i] += piece.output_weight[i];
  } else if (!piece.output_weight.empty()) {
    // Degenerate trunk: the readout acts on x directly.
    for (std::size_t j = 0; j < d; ++j) p.objective[j] += piece.output_weight[j];
  }

  for (std::size_t j = 0; j < d; ++j) {
    p.objective[j] += lin_slope[j];
    if (!piece.input_affine.empty()) p.objective[j] += piece.input_affine[j];
  }
  p.objective_constant = piece.offset + lin_offset;
  return p;
}

}  // namespace cdinn
