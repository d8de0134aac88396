#pragma once

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace aglab::num {

/// Thrown when operand shapes do not agree; message names both shapes.
class ShapeError : public std::runtime_error {
 public:
  explicit ShapeError(const std::string& what) : std::runtime_error(what) {}
};

/// Dense row-major matrix of doubles. Vectors are represented by the
/// surrounding code as plain std::vector<double>; Matrix is used for
/// anything with two named dimensions (weights, gradients, trace grids).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  double* row(std::size_t r) { return data_.data() + r * cols_; }
  const double* row(std::size_t r) const { return data_.data() + r * cols_; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }
  std::string shape_str() const;

  void fill(double v) { data_.assign(data_.size(), v); }
  bool all_finite() const;
  double max_abs() const;

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Inner product with a fixed lane-parallel summation order.
double dot(const double* a, const double* b, std::size_t n);

/// y = W x    (x has W.cols entries, y gets W.rows entries)
void gemv(const Matrix& w, const double* x, double* y);
/// y += W[:, col0 : col0+n] x   where x has n entries
void gemv_cols_acc(const Matrix& w, std::size_t col0, std::size_t n, const double* x, double* y);
/// x += W^T y   (full width)
void gemv_t_acc(const Matrix& w, const double* y, double* x);
/// x += W[:, col0 : col0+n]^T y   (x has n entries)
void gemv_t_cols_acc(const Matrix& w, std::size_t col0, std::size_t n, const double* y, double* x);
/// dW += y x^T  (outer product accumulate)
void ger_acc(Matrix& dw, const double* y, const double* x);
/// dW[:, col0 : col0+n] += y x^T
void ger_cols_acc(Matrix& dw, std::size_t col0, std::size_t n, const double* y, const double* x);

/// Plain deterministic row-major product (fixed i-k-j order).
Matrix matmul(const Matrix& a, const Matrix& b);

}  // namespace aglab::num
