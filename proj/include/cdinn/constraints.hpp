#pragma once

#include "cdinn/simplex.hpp"

namespace cdinn {

// Feasible region for the input search: a per-coordinate box plus affine
// inequalities G x <= h, all in the network's (scaled) input space.
struct ConstraintSet {
  Vector box_lo, box_hi;
  Matrix affine_lhs;  // may have zero rows
  Vector affine_rhs;

  std::size_t dim() const { return box_lo.size(); }

  static ConstraintSet box(Vector lo, Vector hi) {
    ConstraintSet c;
    require(lo.size() == hi.size() && !lo.empty(), "ConstraintSet: bad box");
    for (std::size_t i = 0; i < lo.size(); ++i)
      require(lo[i] <= hi[i], "ConstraintSet: crossed box bounds");
    c.box_lo = std::move(lo);
    c.box_hi = std::move(hi);
    c.affine_lhs = Matrix(0, c.box_lo.size());
    return c;
  }

  static ConstraintSet make(Vector lo, Vector hi, Matrix g, Vector h) {
    ConstraintSet c = box(std::move(lo), std::move(hi));
    require(g.rows == h.size() && (g.rows == 0 || g.cols == c.dim()),
            "ConstraintSet: affine shape mismatch");
    c.affine_lhs = std::move(g);
    c.affine_rhs = std::move(h);
    c.require_nonempty();
    return c;
  }

  bool contains(const Vector& x, double tol = 1e-8) const {
    require(x.size() == dim(), "ConstraintSet::contains: dimension mismatch");
    for (std::size_t i = 0; i < dim(); ++i)
      if (x[i] < box_lo[i] - tol || x[i] > box_hi[i] + tol) return false;
    for (std::size_t r = 0; r < affine_lhs.rows; ++r) {
      double lhs = 0.0;
      for (std::size_t j = 0; j < dim(); ++j) lhs += affine_lhs(r, j) * x[j];
      if (lhs > affine_rhs[r] + tol) return false;
    }
    return true;
  }

  Vector clip_to_box(Vector x) const {
    for (std::size_t i = 0; i < dim(); ++i)
      x[i] = std::min(box_hi[i], std::max(box_lo[i], x[i]));
    return x;
  }

  // LP feasibility probe (zero objective).
  void require_nonempty() const {
    LpProblem p;
    p.objective.assign(dim(), 0.0);
    p.ineq_matrix = affine_lhs;
    p.ineq_rhs = affine_rhs;
    p.lower = box_lo;
    p.upper = box_hi;
    if (solve_lp(p).status != LpStatus::optimal)
      throw std::invalid_argument("ConstraintSet: empty feasible region");
  }
};

}  // namespace cdinn
