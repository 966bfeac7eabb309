#pragma once

#include "cdinn/constraints.hpp"
#include "cdinn/matrix.hpp"

namespace cdinn {

// Invertible per-dimension map between original units and the [-1,1] training
// box. Constraints and optima cross between the two spaces through the same
// object so nothing is scaled twice.
struct AffineScaler {
  Vector mins, maxs;

  std::size_t dim() const { return mins.size(); }

  static AffineScaler fit(const Matrix& data) {
    require(data.rows >= 1 && data.cols >= 1, "AffineScaler: empty data");
    AffineScaler s;
    s.mins.assign(data.cols, kInf);
    s.maxs.assign(data.cols, -kInf);
    for (std::size_t i = 0; i < data.rows; ++i)
      for (std::size_t j = 0; j < data.cols; ++j) {
        s.mins[j] = std::min(s.mins[j], data(i, j));
        s.maxs[j] = std::max(s.maxs[j], data(i, j));
      }
    for (std::size_t j = 0; j < data.cols; ++j)
      require(s.maxs[j] - s.mins[j] > 1e-300, "AffineScaler: degenerate range");
    return s;
  }

  static AffineScaler from_range(Vector mins, Vector maxs) {
    AffineScaler s;
    require(mins.size() == maxs.size(), "AffineScaler: range size mismatch");
    for (std::size_t j = 0; j < mins.size(); ++j)
      require(maxs[j] - mins[j] > 1e-300, "AffineScaler: degenerate range");
    s.mins = std::move(mins);
    s.maxs = std::move(maxs);
    return s;
  }

  double transform1(double v, std::size_t j = 0) const {
    return 2.0 * (v - mins[j]) / (maxs[j] - mins[j]) - 1.0;
  }
  double inverse1(double v, std::size_t j = 0) const {
    return mins[j] + (v + 1.0) * 0.5 * (maxs[j] - mins[j]);
  }

  Vector transform(const Vector& x) const {
    require(x.size() == dim(), "AffineScaler::transform: dimension mismatch");
    Vector y(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) y[j] = transform1(x[j], j);
    return y;
  }

  Vector inverse_transform(const Vector& x) const {
    require(x.size() == dim(), "AffineScaler::inverse_transform: dimension mismatch");
    Vector y(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) y[j] = inverse1(x[j], j);
    return y;
  }

  Matrix transform_rows(const Matrix& data) const {
    require(data.cols == dim(), "AffineScaler::transform_rows: dimension mismatch");
    Matrix out(data.rows, data.cols);
    for (std::size_t i = 0; i < data.rows; ++i)
      for (std::size_t j = 0; j < data.cols; ++j) out(i, j) = transform1(data(i, j), j);
    return out;
  }

  // Maps a constraint set stated in original units into scaled space:
  // x = mid + half ∘ x_s turns G x <= h into (G ∘ half) x_s <= h - G mid.
  ConstraintSet scale_constraints(const Vector& box_lo, const Vector& box_hi,
                                  const Matrix& affine_lhs, const Vector& affine_rhs) const {
    const std::size_t d = dim();
    require(box_lo.size() == d && box_hi.size() == d, "scale_constraints: box dimension");
    Vector lo(d), hi(d);
    for (std::size_t j = 0; j < d; ++j) {
      lo[j] = transform1(box_lo[j], j);
      hi[j] = transform1(box_hi[j], j);
    }
    Matrix g(affine_lhs.rows, d);
    Vector h = affine_rhs;
    for (std::size_t r = 0; r < affine_lhs.rows; ++r)
      for (std::size_t j = 0; j < d; ++j) {
        const double mid = 0.5 * (mins[j] + maxs[j]);
        const double half = 0.5 * (maxs[j] - mins[j]);
        g(r, j) = affine_lhs(r, j) * half;
        h[r] -= affine_lhs(r, j) * mid;
      }
    return ConstraintSet::make(std::move(lo), std::move(hi), std::move(g), std::move(h));
  }
};

}  // namespace cdinn
