#pragma once

#include <functional>
#include <vector>

#include "aglab/param.hpp"
#include "aglab/rng.hpp"

namespace aglab::num {

/// Central-difference verification of analytic gradients.
///
/// `loss` evaluates the scalar loss for the current parameter values
/// (forward only, deterministic); `accumulate` zeroes gradients and runs
/// the analytic forward+backward path once. Samples min(min_samples,
/// total) distinct entries across all unfrozen parameters and returns
/// the max of |analytic - numeric| / max(|analytic|, |numeric|, 1e-8).
/// Returns 0 when there is nothing to sample.
double grad_check(const std::function<double()>& loss, const std::function<void()>& accumulate,
                  const std::vector<Parameter*>& params, double eps, std::size_t min_samples,
                  Rng& rng);

}  // namespace aglab::num
