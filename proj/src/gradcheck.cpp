#include "aglab/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace aglab::num {

double grad_check(const std::function<double()>& loss, const std::function<void()>& accumulate,
                  const std::vector<Parameter*>& params, double eps, std::size_t min_samples,
                  Rng& rng) {
  accumulate();

  std::vector<std::pair<Parameter*, std::size_t>> entries;
  for (Parameter* p : params) {
    if (p->frozen) continue;
    for (std::size_t i = 0; i < p->value.size(); ++i) entries.emplace_back(p, i);
  }
  if (entries.empty()) return 0.0;

  std::vector<std::size_t> chosen;
  if (entries.size() <= min_samples) {
    chosen.resize(entries.size());
    for (std::size_t i = 0; i < chosen.size(); ++i) chosen[i] = i;
  } else {
    chosen = rng.sample_without_replacement(entries.size(), min_samples);
  }

  double worst = 0.0;
  for (std::size_t idx : chosen) {
    Parameter* p = entries[idx].first;
    const std::size_t i = entries[idx].second;
    const double analytic = p->grad.data()[i];
    double& w = p->value.data()[i];
    const double saved = w;
    w = saved + eps;
    const double lp = loss();
    w = saved - eps;
    const double lm = loss();
    w = saved;
    const double numeric = (lp - lm) / (2.0 * eps);
    const double denom = std::max({std::fabs(analytic), std::fabs(numeric), 1e-8});
    worst = std::max(worst, std::fabs(analytic - numeric) / denom);
  }
  return worst;
}

}  // namespace aglab::num
