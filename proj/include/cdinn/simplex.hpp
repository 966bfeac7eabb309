#pragma once

#include <cstddef>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "cdinn/matrix.hpp"

namespace cdinn {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class LpStatus { optimal, infeasible, unbounded };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "?";
}

// min objective . v + objective_constant
// s.t. ineq_matrix v <= ineq_rhs,  lower <= v <= upper (entries may be ±inf).
struct LpProblem {
  Vector objective;
  Matrix ineq_matrix;
  Vector ineq_rhs;
  Vector lower;
  Vector upper;
  double objective_constant = 0.0;
  std::vector<std::string> names;  // optional, for the text dump

  std::size_t num_vars() const { return objective.size(); }
  std::size_t num_rows() const { return ineq_matrix.rows; }

  void validate() const {
    require(ineq_matrix.cols == num_vars() || ineq_matrix.rows == 0,
            "LpProblem: constraint matrix width mismatch");
    require(ineq_rhs.size() == ineq_matrix.rows, "LpProblem: rhs length mismatch");
    require(lower.size() == num_vars() && upper.size() == num_vars(),
            "LpProblem: bound length mismatch");
    for (std::size_t j = 0; j < num_vars(); ++j)
      require(!(std::isfinite(lower[j]) && std::isfinite(upper[j]) && lower[j] > upper[j]),
              "LpProblem: crossed bounds");
  }
};

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  double value = 0.0;
  Vector x;
  std::size_t iterations = 0;
};

namespace lp_detail {

constexpr double kPivotTol = 1e-10;
constexpr double kFeasTol = 1e-8;

// Dense two-phase primal simplex with Bland's rule. Everything is index-
// ordered, so identical problems pivot identically and solutions replay
// bit-for-bit.
struct Tableau {
  std::size_t m = 0;       // rows
  std::size_t n = 0;       // columns (structural + slack + artificial)
  std::size_t n_real = 0;  // columns that are not artificial
  std::vector<Vector> a;   // m rows of n coefficients
  Vector b;                // rhs, kept >= 0
  Vector cost;             // phase-2 reduced cost row
  Vector art_cost;         // phase-1 reduced cost row
  double obj = 0.0;        // phase-2 objective value (negated bookkeeping)
  double art_obj = 0.0;
  std::vector<std::size_t> basis;
  std::size_t pivots = 0;

  void pivot(std::size_t r, std::size_t c, bool phase1) {
    const double inv = 1.0 / a[r][c];
    for (std::size_t j = 0; j < n; ++j) a[r][j] *= inv;
    b[r] *= inv;
    a[r][c] = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r) continue;
      const double f = a[i][c];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) a[i][j] -= f * a[r][j];
      a[i][c] = 0.0;
      b[i] -= f * b[r];
    }
    auto wipe = [&](Vector& row, double& objval) {
      const double f = row[c];
      if (f == 0.0) return;
      for (std::size_t j = 0; j < n; ++j) row[j] -= f * a[r][j];
      row[c] = 0.0;
      objval -= f * b[r];
    };
    wipe(cost, obj);
    if (phase1) wipe(art_cost, art_obj);
    basis[r] = c;
    ++pivots;
  }

  // Returns false when the phase objective is unbounded below.
  bool run(bool phase1) {
    Vector& c_row = phase1 ? art_cost : cost;
    for (;;) {
      // Bland: first column with negative reduced cost.
      std::size_t enter = n;
      const std::size_t limit = phase1 ? n : n_real;
      for (std::size_t j = 0; j < limit; ++j) {
        if (c_row[j] < -kPivotTol) {
          enter = j;
          break;
        }
      }
      if (enter == n) return true;  // optimal for this phase
      // Ratio test; ties broken by smallest basis index (Bland).
      std::size_t leave = m;
      double best = kInf;
      for (std::size_t i = 0; i < m; ++i) {
        if (a[i][enter] > kPivotTol) {
          const double ratio = b[i] / a[i][enter];
          if (ratio < best - 1e-12 ||
              (ratio < best + 1e-12 && (leave == m || basis[i] < basis[leave]))) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave == m) return false;  // unbounded
      pivot(leave, enter, phase1);
    }
  }
};

}  // namespace lp_detail

inline LpSolution solve_lp(const LpProblem& p) {
  using namespace lp_detail;
  p.validate();
  require(all_finite(p.objective) && all_finite(p.ineq_matrix.data) && all_finite(p.ineq_rhs),
          "solve_lp: non-finite problem data");

  const std::size_t nv = p.num_vars();

  // Variable transform to s >= 0: v = shift + sign * s (split vars get two
  // columns). Finite two-sided bounds add an upper-bound row on s.
  struct VarMap {
    double shift = 0.0;
    double sign = 1.0;
    std::size_t col = 0;
    std::size_t neg_col = std::size_t(-1);  // second column when split
  };
  std::vector<VarMap> vmap(nv);
  std::size_t ncols = 0;
  std::size_t extra_rows = 0;
  for (std::size_t j = 0; j < nv; ++j) {
    const double lo = p.lower[j], hi = p.upper[j];
    if (std::isfinite(lo)) {
      vmap[j] = {lo, 1.0, ncols++, std::size_t(-1)};
      if (std::isfinite(hi)) ++extra_rows;
    } else if (std::isfinite(hi)) {
      vmap[j] = {hi, -1.0, ncols++, std::size_t(-1)};
    } else {
      vmap[j].shift = 0.0;
      vmap[j].sign = 1.0;
      vmap[j].col = ncols++;
      vmap[j].neg_col = ncols++;
    }
  }

  const std::size_t m = p.num_rows() + extra_rows;
  // Row storage: structural coefficients and rhs before slacks.
  std::vector<Vector> rows(m, Vector(ncols, 0.0));
  Vector rhs(m, 0.0);
  for (std::size_t i = 0; i < p.num_rows(); ++i) {
    double shift_sum = 0.0;
    for (std::size_t j = 0; j < nv; ++j) {
      const double aij = p.ineq_matrix(i, j);
      if (aij == 0.0) continue;
      shift_sum += aij * vmap[j].shift;
      rows[i][vmap[j].col] += aij * vmap[j].sign;
      if (vmap[j].neg_col != std::size_t(-1)) rows[i][vmap[j].neg_col] -= aij;
    }
    rhs[i] = p.ineq_rhs[i] - shift_sum;
  }
  {
    std::size_t r = p.num_rows();
    for (std::size_t j = 0; j < nv; ++j) {
      if (std::isfinite(p.lower[j]) && std::isfinite(p.upper[j])) {
        rows[r][vmap[j].col] = 1.0;
        rhs[r] = p.upper[j] - p.lower[j];
        ++r;
      }
    }
  }

  // Count artificials: rows whose rhs is negative get negated, turning their
  // slack into a surplus, so they need an artificial basis column.
  std::size_t n_art = 0;
  for (std::size_t i = 0; i < m; ++i)
    if (rhs[i] < 0.0) ++n_art;

  Tableau t;
  t.m = m;
  t.n_real = ncols + m;
  t.n = t.n_real + n_art;
  t.a.assign(m, Vector(t.n, 0.0));
  t.b.assign(m, 0.0);
  t.cost.assign(t.n, 0.0);
  t.art_cost.assign(t.n, 0.0);
  t.basis.assign(m, 0);

  std::size_t art = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double flip = rhs[i] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < ncols; ++j) t.a[i][j] = flip * rows[i][j];
    t.a[i][ncols + i] = flip;  // slack
    t.b[i] = flip * rhs[i];
    if (flip < 0.0) {
      const std::size_t ac = t.n_real + art;
      t.a[i][ac] = 1.0;
      t.basis[i] = ac;
      ++art;
    } else {
      t.basis[i] = ncols + i;
    }
  }

  // Phase-2 cost on structural columns (the objective value is recomputed
  // from the recovered point at the end, so shifts need no bookkeeping here).
  for (std::size_t j = 0; j < nv; ++j) {
    t.cost[vmap[j].col] += p.objective[j] * vmap[j].sign;
    if (vmap[j].neg_col != std::size_t(-1)) t.cost[vmap[j].neg_col] -= p.objective[j];
  }
  // Phase-1 cost: sum of artificials; express in nonbasic terms by
  // subtracting the artificial rows.
  if (n_art > 0) {
    for (std::size_t i = 0; i < m; ++i) {
      if (t.basis[i] >= t.n_real) {
        for (std::size_t j = 0; j < t.n_real; ++j) t.art_cost[j] -= t.a[i][j];
        t.art_obj -= t.b[i];
      }
    }
  }

  LpSolution sol;
  if (n_art > 0) {
    t.run(true);  // phase-1 objective is bounded below by zero
    if (-t.art_obj > kFeasTol) {
      sol.status = LpStatus::infeasible;
      sol.iterations = t.pivots;
      return sol;
    }
    // Drive leftover artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i) {
      if (t.basis[i] >= t.n_real) {
        std::size_t c = t.n;
        for (std::size_t j = 0; j < t.n_real; ++j) {
          if (std::abs(t.a[i][j]) > kPivotTol) {
            c = j;
            break;
          }
        }
        if (c < t.n) t.pivot(i, c, true);
        // Otherwise the row is redundant; the artificial stays basic at zero.
      }
    }
  }

  if (!t.run(false)) {
    sol.status = LpStatus::unbounded;
    sol.iterations = t.pivots;
    return sol;
  }

  Vector s(t.n_real, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (t.basis[i] < t.n_real) s[t.basis[i]] = t.b[i];
  sol.x.assign(nv, 0.0);
  for (std::size_t j = 0; j < nv; ++j) {
    double v = vmap[j].shift + vmap[j].sign * s[vmap[j].col];
    if (vmap[j].neg_col != std::size_t(-1)) v -= s[vmap[j].neg_col];
    sol.x[j] = v;
  }
  sol.status = LpStatus::optimal;
  sol.iterations = t.pivots;
  sol.value = p.objective_constant;
  for (std::size_t j = 0; j < nv; ++j) sol.value += p.objective[j] * sol.x[j];
  return sol;
}

// Plain-text dump in the CPLEX LP flavor, for eyeballing failing problems.
inline std::string lp_to_text(const LpProblem& p) {
  auto name = [&](std::size_t j) {
    return j < p.names.size() && !p.names[j].empty() ? p.names[j] : "v" + std::to_string(j);
  };
  std::ostringstream os;
  os << "Minimize\n obj:";
  for (std::size_t j = 0; j < p.num_vars(); ++j)
    if (p.objective[j] != 0.0)
      os << (p.objective[j] >= 0 ? " + " : " - ") << std::abs(p.objective[j]) << " " << name(j);
  if (p.objective_constant != 0.0) os << " + " << p.objective_constant;
  os << "\nSubject To\n";
  for (std::size_t i = 0; i < p.num_rows(); ++i) {
    os << " c" << i << ":";
    for (std::size_t j = 0; j < p.num_vars(); ++j)
      if (p.ineq_matrix(i, j) != 0.0)
        os << (p.ineq_matrix(i, j) >= 0 ? " + " : " - ") << std::abs(p.ineq_matrix(i, j)) << " "
           << name(j);
    os << " <= " << p.ineq_rhs[i] << "\n";
  }
  os << "Bounds\n";
  for (std::size_t j = 0; j < p.num_vars(); ++j) {
    os << " ";
    if (std::isfinite(p.lower[j]))
      os << p.lower[j] << " <= " << name(j);
    else
      os << "-inf <= " << name(j);
    if (std::isfinite(p.upper[j]))
      os << " <= " << p.upper[j];
    os << "\n";
  }
  os << "End\n";
  return os.str();
}

}  // namespace cdinn
