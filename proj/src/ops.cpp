#include "aglab/ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aglab::num {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void sigmoid_inplace(std::vector<double>& v) {
  for (double& x : v) x = sigmoid(x);
}

void tanh_inplace(std::vector<double>& v) {
  for (double& x : v) x = std::tanh(x);
}

Matrix sigmoid(const Matrix& m) {
  Matrix out = m;
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) = sigmoid(out(i, j));
  return out;
}

Matrix tanh(const Matrix& m) {
  Matrix out = m;
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) = std::tanh(out(i, j));
  return out;
}

void softmax_inplace(std::vector<double>& scores) {
  if (scores.empty()) throw std::logic_error("softmax: empty input");
  const double m = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (double& s : scores) {
    s = std::exp(s - m);
    sum += s;
  }
  for (double& s : scores) s /= sum;
}

std::vector<double> softmax(const std::vector<double>& scores) {
  std::vector<double> out = scores;
  softmax_inplace(out);
  return out;
}

double cross_entropy(const std::vector<double>& predicted, std::size_t target, bool* clamped) {
  if (target >= predicted.size())
    throw std::logic_error("cross_entropy: target index out of range");
  double p = predicted[target];
  if (p < kLogFloor) {
    p = kLogFloor;
    if (clamped) *clamped = true;
  }
  return -std::log(p);
}

}  // namespace aglab::num
