#include "aglab/stats.hpp"

#include <algorithm>
#include <stdexcept>

namespace aglab::analysis {

namespace {

// type-7 linear interpolation quantile over a sorted sample
double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
  if (sorted.size() == 1) return sorted[0];
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

const num::Matrix& pick_h(const ActivationTrace& tr, Half half) {
  return half == Half::Encoder ? tr.enc_h : tr.dec_h;
}

const num::Matrix& pick_gate(const ActivationTrace& tr, Half half, Gate gate) {
  if (half == Half::Encoder) return gate == Gate::Update ? tr.enc_z : tr.enc_r;
  return gate == Gate::Update ? tr.dec_z : tr.dec_r;
}

}  // namespace

std::vector<DistributionSummary> activation_distributions(
    const std::vector<ActivationTrace>& traces, Half half, std::size_t k, num::Rng& rng) {
  if (traces.empty()) throw std::invalid_argument("activation_distributions: no traces");
  const std::size_t H = pick_h(traces.front(), half).cols();
  const auto units = rng.sample_without_replacement(H, std::min(k, H));

  std::vector<DistributionSummary> out;
  out.reserve(units.size());
  for (const std::size_t u : units) {
    std::vector<double> vals;
    for (const auto& tr : traces) {
      const auto& m = pick_h(tr, half);
      for (std::size_t t = 0; t < m.rows(); ++t) vals.push_back(m(t, u));
    }
    std::sort(vals.begin(), vals.end());
    DistributionSummary s;
    s.unit = u;
    s.min = vals.front();
    s.q1 = quantile_sorted(vals, 0.25);
    s.median = quantile_sorted(vals, 0.50);
    s.q3 = quantile_sorted(vals, 0.75);
    s.max = vals.back();
    out.push_back(s);
  }
  return out;
}

double SaturationStats::right_saturated_unit_fraction(double cut) const {
  if (right.empty()) return 0.0;
  std::size_t n = 0;
  for (double r : right)
    if (r >= cut) ++n;
  return static_cast<double>(n) / static_cast<double>(right.size());
}

SaturationStats gate_saturation(const std::vector<ActivationTrace>& traces, Half half, Gate gate,
                                double lo, double hi) {
  if (traces.empty()) throw std::invalid_argument("gate_saturation: no traces");
  const std::size_t H = pick_gate(traces.front(), half, gate).cols();
  std::vector<std::size_t> left_n(H, 0), right_n(H, 0);
  std::size_t obs = 0;
  for (const auto& tr : traces) {
    const auto& m = pick_gate(tr, half, gate);
    for (std::size_t t = 0; t < m.rows(); ++t) {
      ++obs;
      const double* row = m.row(t);
      for (std::size_t u = 0; u < H; ++u) {
        if (row[u] < lo) ++left_n[u];
        if (row[u] > hi) ++right_n[u];
      }
    }
  }
  SaturationStats s;
  s.observations = obs;
  s.left.resize(H);
  s.right.resize(H);
  for (std::size_t u = 0; u < H; ++u) {
    s.left[u] = static_cast<double>(left_n[u]) / static_cast<double>(obs);
    s.right[u] = static_cast<double>(right_n[u]) / static_cast<double>(obs);
  }
  return s;
}

}  // namespace aglab::analysis
