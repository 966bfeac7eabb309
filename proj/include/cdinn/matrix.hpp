#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace cdinn {

using Vector = std::vector<double>;

// Dense row-major matrix. Everything in this library is small and dense, so
// there is no view or expression machinery, just storage plus the handful of
// kernels the layers and the simplex tableau need.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rs) {
    Matrix m;
    m.rows = rs.size();
    m.cols = rs.size() ? rs.begin()->size() : 0;
    m.data.reserve(m.rows * m.cols);
    for (const auto& r : rs) {
      if (r.size() != m.cols) throw std::invalid_argument("Matrix::from_rows: ragged rows");
      m.data.insert(m.data.end(), r.begin(), r.end());
    }
    return m;
  }

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  const double* row_ptr(std::size_t i) const { return data.data() + i * cols; }
  double* row_ptr(std::size_t i) { return data.data() + i * cols; }

  bool empty() const { return data.empty(); }
  std::size_t size() const { return data.size(); }
};

inline bool all_finite(const Vector& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

inline bool all_finite(const Matrix& m) {
  for (double x : m.data)
    if (!std::isfinite(x)) return false;
  return true;
}

inline void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

inline void require_finite(const Vector& v, const std::string& what) {
  if (!all_finite(v)) throw std::runtime_error(what + ": non-finite value");
}

// y += A x
inline void matvec_add(const Matrix& a, const Vector& x, Vector& y) {
  require(a.cols == x.size() && a.rows == y.size(), "matvec_add: shape mismatch");
  for (std::size_t i = 0; i < a.rows; ++i) {
    const double* row = a.row_ptr(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < a.cols; ++j) acc += row[j] * x[j];
    y[i] += acc;
  }
}

// y += (A ∘ A) x, i.e. the entrywise square of A applied to x.
inline void matvec_squared_add(const Matrix& a, const Vector& x, Vector& y) {
  require(a.cols == x.size() && a.rows == y.size(), "matvec_squared_add: shape mismatch");
  for (std::size_t i = 0; i < a.rows; ++i) {
    const double* row = a.row_ptr(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < a.cols; ++j) acc += row[j] * row[j] * x[j];
    y[i] += acc;
  }
}

inline Vector matvec(const Matrix& a, const Vector& x) {
  Vector y(a.rows, 0.0);
  matvec_add(a, x, y);
  return y;
}

inline double dot(const Vector& a, const Vector& b) {
  require(a.size() == b.size(), "dot: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline Matrix elementwise_square(const Matrix& a) {
  Matrix r = a;
  for (double& v : r.data) v = v * v;
  return r;
}

}  // namespace cdinn
