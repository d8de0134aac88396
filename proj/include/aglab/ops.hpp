#pragma once

#include <cstddef>
#include <vector>

#include "aglab/matrix.hpp"

namespace aglab::num {

/// Floor applied inside logarithms so degenerate zero probabilities
/// yield a large finite loss instead of -inf.
inline constexpr double kLogFloor = 1e-12;

double sigmoid(double x);

void sigmoid_inplace(std::vector<double>& v);
void tanh_inplace(std::vector<double>& v);

Matrix sigmoid(const Matrix& m);
Matrix tanh(const Matrix& m);

/// Numerically stable softmax (max subtraction); sums to 1 within 1e-12.
std::vector<double> softmax(const std::vector<double>& scores);
void softmax_inplace(std::vector<double>& scores);

/// -log(predicted[target]) with the kLogFloor clamp. If the clamp fired,
/// *clamped (when non-null) is set.
double cross_entropy(const std::vector<double>& predicted, std::size_t target,
                     bool* clamped = nullptr);

}  // namespace aglab::num
