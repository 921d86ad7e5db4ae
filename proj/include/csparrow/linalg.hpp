#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "csparrow/error.hpp"

namespace csparrow {

// Minimal dense row-major matrix with the two factorization-backed
// operations the chain analysis needs: linear solve and inversion, both
// via LU with partial pivoting.

class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), d_(static_cast<std::size_t>(rows) * cols, fill) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& at(int r, int c) { return d_[static_cast<std::size_t>(r) * cols_ + c]; }
  double at(int r, int c) const { return d_[static_cast<std::size_t>(r) * cols_ + c]; }

  const double* row_data(int r) const { return d_.data() + static_cast<std::size_t>(r) * cols_; }
  double* row_data(int r) { return d_.data() + static_cast<std::size_t>(r) * cols_; }

  Matrix operator*(const Matrix& o) const {
    Matrix out(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const double a = at(i, k);
        if (a == 0.0) continue;
        for (int j = 0; j < o.cols_; ++j) out.at(i, j) += a * o.at(k, j);
      }
    return out;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> d_;
};

// LU factorization with partial pivoting, kept for repeated solves.
class LuFactorization {
 public:
  explicit LuFactorization(Matrix a) : lu_(std::move(a)), perm_(lu_.rows()) {
    const int n = lu_.rows();
    if (n != lu_.cols())
      throw Error(ErrorCode::InvalidConfig, "LU requires a square matrix");
    for (int i = 0; i < n; ++i) perm_[static_cast<std::size_t>(i)] = i;
    for (int k = 0; k < n; ++k) {
      int pivot = k;
      double best = std::fabs(lu_.at(k, k));
      for (int i = k + 1; i < n; ++i) {
        const double v = std::fabs(lu_.at(i, k));
        if (v > best) {
          best = v;
          pivot = i;
        }
      }
      if (best == 0.0)
        throw Error(ErrorCode::NotConverged, "singular matrix in LU factorization");
      if (pivot != k) {
        for (int j = 0; j < n; ++j) std::swap(lu_.at(k, j), lu_.at(pivot, j));
        std::swap(perm_[static_cast<std::size_t>(k)], perm_[static_cast<std::size_t>(pivot)]);
      }
      const double inv = 1.0 / lu_.at(k, k);
      for (int i = k + 1; i < n; ++i) {
        const double factor = lu_.at(i, k) * inv;
        lu_.at(i, k) = factor;
        if (factor == 0.0) continue;
        for (int j = k + 1; j < n; ++j) lu_.at(i, j) -= factor * lu_.at(k, j);
      }
    }
  }

  std::vector<double> solve(const std::vector<double>& b) const {
    const int n = lu_.rows();
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(perm_[static_cast<std::size_t>(i)])];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) x[static_cast<std::size_t>(i)] -= lu_.at(i, j) * x[static_cast<std::size_t>(j)];
    for (int i = n - 1; i >= 0; --i) {
      for (int j = i + 1; j < n; ++j) x[static_cast<std::size_t>(i)] -= lu_.at(i, j) * x[static_cast<std::size_t>(j)];
      x[static_cast<std::size_t>(i)] /= lu_.at(i, i);
    }
    return x;
  }

 private:
  Matrix lu_;
  std::vector<int> perm_;
};

// Solve Ax = b with one round of iterative refinement; the residual pass
// recovers the last couple of digits on ill-scaled stationary systems.
inline std::vector<double> lu_solve_refined(const Matrix& a, const std::vector<double>& b) {
  const LuFactorization lu(a);
  std::vector<double> x = lu.solve(b);
  const int n = a.rows();
  for (int pass = 0; pass < 2; ++pass) {
    std::vector<double> r(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      long double acc = 0.0L;
      for (int j = 0; j < n; ++j) acc += static_cast<long double>(a.at(i, j)) * x[static_cast<std::size_t>(j)];
      r[static_cast<std::size_t>(i)] = static_cast<double>(static_cast<long double>(b[static_cast<std::size_t>(i)]) - acc);
    }
    const std::vector<double> dx = lu.solve(r);
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] += dx[static_cast<std::size_t>(i)];
  }
  return x;
}

inline Matrix invert(const Matrix& a) {
  const int n = a.rows();
  const LuFactorization lu(a);
  Matrix inv(n, n);
  std::vector<double> e(static_cast<std::size_t>(n), 0.0);
  for (int c = 0; c < n; ++c) {
    e[static_cast<std::size_t>(c)] = 1.0;
    const std::vector<double> col = lu.solve(e);
    e[static_cast<std::size_t>(c)] = 0.0;
    for (int r = 0; r < n; ++r) inv.at(r, c) = col[static_cast<std::size_t>(r)];
  }
  return inv;
}

}  // namespace csparrow
