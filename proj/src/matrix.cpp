#include "aglab/matrix.hpp"

#include <cmath>
#include <cstdlib>

namespace aglab::num {

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(rows.size(), rows.size() ? rows.begin()->size() : 0);
  std::size_t r = 0;
  for (const auto& row : rows) {
    if (row.size() != m.cols()) throw ShapeError("from_rows: ragged initializer");
    std::size_t c = 0;
    for (double v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

std::string Matrix::shape_str() const {
  return "[" + std::to_string(rows_) + "x" + std::to_string(cols_) + "]";
}

bool Matrix::all_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::fabs(v));
  return m;
}

namespace {

// Fixed eight-lane summation order: lane j accumulates elements j, j+8,
// j+16, ... and lanes combine pairwise. Deterministic, and deep enough
// to hide FMA latency.
inline double dot8(const double* __restrict a, const double* __restrict b, std::size_t n) {
  const std::size_t tail = n & ~std::size_t(7);
  double a0 = 0, a1 = 0, a2 = 0, a3 = 0, a4 = 0, a5 = 0, a6 = 0, a7 = 0;
  for (std::size_t k = 0; k < tail; k += 8) {
    a0 += a[k] * b[k];
    a1 += a[k + 1] * b[k + 1];
    a2 += a[k + 2] * b[k + 2];
    a3 += a[k + 3] * b[k + 3];
    a4 += a[k + 4] * b[k + 4];
    a5 += a[k + 5] * b[k + 5];
    a6 += a[k + 6] * b[k + 6];
    a7 += a[k + 7] * b[k + 7];
  }
  double acc = ((a0 + a1) + (a2 + a3)) + ((a4 + a5) + (a6 + a7));
  for (std::size_t k = tail; k < n; ++k) acc += a[k] * b[k];
  return acc;
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) { return dot8(a, b, n); }

void gemv(const Matrix& w, const double* __restrict x, double* __restrict y) {
  const std::size_t rows = w.rows(), cols = w.cols();
  for (std::size_t i = 0; i < rows; ++i) y[i] = dot8(w.row(i), x, cols);
}

void gemv_cols_acc(const Matrix& w, std::size_t col0, std::size_t n, const double* __restrict x,
                   double* __restrict y) {
  const std::size_t rows = w.rows();
  for (std::size_t i = 0; i < rows; ++i) y[i] += dot8(w.row(i) + col0, x, n);
}

void gemv_t_acc(const Matrix& w, const double* __restrict y, double* __restrict x) {
  const std::size_t rows = w.rows(), cols = w.cols();
  for (std::size_t i = 0; i < rows; ++i) {
    const double* __restrict wr = w.row(i);
    const double yi = y[i];
    for (std::size_t k = 0; k < cols; ++k) x[k] += wr[k] * yi;
  }
}

void gemv_t_cols_acc(const Matrix& w, std::size_t col0, std::size_t n, const double* __restrict y,
                     double* __restrict x) {
  const std::size_t rows = w.rows();
  for (std::size_t i = 0; i < rows; ++i) {
    const double* __restrict wr = w.row(i) + col0;
    const double yi = y[i];
    for (std::size_t k = 0; k < n; ++k) x[k] += wr[k] * yi;
  }
}

void ger_acc(Matrix& dw, const double* __restrict y, const double* __restrict x) {
  const std::size_t rows = dw.rows(), cols = dw.cols();
  for (std::size_t i = 0; i < rows; ++i) {
    double* __restrict dr = dw.row(i);
    const double yi = y[i];
    for (std::size_t k = 0; k < cols; ++k) dr[k] += yi * x[k];
  }
}

void ger_cols_acc(Matrix& dw, std::size_t col0, std::size_t n, const double* __restrict y,
                  const double* __restrict x) {
  const std::size_t rows = dw.rows();
  for (std::size_t i = 0; i < rows; ++i) {
    double* __restrict dr = dw.row(i) + col0;
    const double yi = y[i];
    for (std::size_t k = 0; k < n; ++k) dr[k] += yi * x[k];
  }
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows())
    throw ShapeError("matmul: inner dimensions disagree, " + a.shape_str() + " x " +
                     b.shape_str());
  Matrix out(a.rows(), b.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* __restrict ar = a.row(i);
    double* __restrict outr = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = ar[k];
      const double* __restrict br = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) outr[j] += aik * br[j];
    }
  }
  return out;
}

}  // namespace aglab::num
