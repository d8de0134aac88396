#pragma once

#include <cstddef>
#include <vector>

#include "aglab/param.hpp"

namespace aglab::num {

/// Bias-corrected Adam over a fixed list of parameters. Moments are
/// allocated shape-matched on construction; the step counter increases
/// by one per step(). Frozen parameters are skipped entirely, leaving
/// value and moments untouched.
class AdamState {
 public:
  AdamState(std::vector<Parameter*> params, double lr = 0.001, double beta1 = 0.9,
            double beta2 = 0.999, double epsilon = 1e-8);

  void step();

  std::size_t t() const { return t_; }
  double lr() const { return lr_; }
  const Matrix& first_moment(std::size_t i) const { return m_[i]; }
  const Matrix& second_moment(std::size_t i) const { return v_[i]; }

 private:
  std::vector<Parameter*> params_;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
  std::size_t t_ = 0;
  double lr_, beta1_, beta2_, epsilon_;
};

}  // namespace aglab::num
