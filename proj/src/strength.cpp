#include "aglab/strength.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace aglab::analysis {

std::vector<double> neuron_strength(const seq2seq::Seq2SeqModel& model, Half half) {
  auto& m = const_cast<seq2seq::Seq2SeqModel&>(model);
  const std::size_t H = model.hidden();
  const auto& cell = half == Half::Encoder ? m.encoder : m.decoder;
  // [s; h] layout of the scorer and [s; ctx] layout of the combine
  // layer: decoder units occupy columns [0, H), encoder units [H, 2H)
  const std::size_t tail_col0 = half == Half::Encoder ? H : 0;

  std::vector<double> sum(H, 0.0);
  std::vector<std::size_t> count(H, 0);

  auto add_rows = [&](const num::Matrix& w) {
    for (std::size_t u = 0; u < H; ++u) {
      const double* r = w.row(u);
      for (std::size_t k = 0; k < w.cols(); ++k) sum[u] += std::fabs(r[k]);
      count[u] += w.cols();
    }
  };
  auto add_cols = [&](const num::Matrix& w, std::size_t col0) {
    for (std::size_t i = 0; i < w.rows(); ++i) {
      const double* r = w.row(i) + col0;
      for (std::size_t u = 0; u < H; ++u) {
        sum[u] += std::fabs(r[u]);
        ++count[u];
      }
    }
  };

  add_rows(cell.W_iz.value);
  add_rows(cell.W_ir.value);
  add_rows(cell.W_ih.value);
  add_rows(cell.W_hz.value);
  add_rows(cell.W_hr.value);
  add_rows(cell.W_hh.value);
  add_cols(cell.W_hz.value, 0);
  add_cols(cell.W_hr.value, 0);
  add_cols(cell.W_hh.value, 0);
  add_cols(m.attention.W1.value, tail_col0);
  add_cols(m.combine_w.value, tail_col0);

  std::vector<double> strength(H);
  for (std::size_t u = 0; u < H; ++u) strength[u] = sum[u] / static_cast<double>(count[u]);
  return strength;
}

std::vector<std::size_t> top_fraction(const std::vector<double>& strength, double frac) {
  if (frac < 0.0 || frac > 1.0) throw std::invalid_argument("top_fraction: frac outside [0,1]");
  const std::size_t keep = static_cast<std::size_t>(
      std::ceil(frac * static_cast<double>(strength.size())));
  std::vector<std::size_t> idx(strength.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return strength[a] > strength[b]; });
  idx.resize(keep);
  return idx;
}

}  // namespace aglab::analysis
