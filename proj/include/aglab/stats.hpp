#pragma once

#include <vector>

#include "aglab/rng.hpp"
#include "aglab/trace.hpp"

namespace aglab::analysis {

struct DistributionSummary {
  std::size_t unit = 0;
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
  double range() const { return max - min; }
};

/// Activation summaries for k randomly sampled hidden units of one half,
/// pooled over all examples and steps in the traces.
std::vector<DistributionSummary> activation_distributions(
    const std::vector<ActivationTrace>& traces, Half half, std::size_t k, num::Rng& rng);

struct SaturationStats {
  std::vector<double> left;   // per unit: fraction of observations < lo
  std::vector<double> right;  // per unit: fraction of observations > hi
  std::size_t observations = 0;

  /// Fraction of units whose right-saturation fraction is >= cut.
  double right_saturated_unit_fraction(double cut) const;
};

/// Saturation fractions per gate unit over all samples and timesteps.
SaturationStats gate_saturation(const std::vector<ActivationTrace>& traces, Half half, Gate gate,
                                double lo = 0.1, double hi = 0.9);

}  // namespace aglab::analysis
