#pragma once

#include <string>

#include "aglab/matrix.hpp"

namespace aglab::num {

/// A learnable tensor: value, gradient of the same shape, and a freeze
/// flag. Frozen parameters receive zero gradient from backward passes
/// and are left bit-identical by optimizer steps.
struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;
  bool frozen = false;

  Parameter() = default;
  Parameter(std::string n, std::size_t rows, std::size_t cols)
      : name(std::move(n)), value(rows, cols), grad(rows, cols) {}

  void zero_grad() { grad.fill(0.0); }
};

}  // namespace aglab::num
