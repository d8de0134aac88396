#include "aglab/probe.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "aglab/ops.hpp"
#include "aglab/strength.hpp"

namespace aglab::analysis {

const char* to_string(ProbeKind k) {
  switch (k) {
    case ProbeKind::TableEncoderHidden: return "table-encoder-hidden";
    case ProbeKind::TableDecoderUpdateGate: return "table-decoder-update-gate";
    case ProbeKind::TableDecoderResetGate: return "table-decoder-reset-gate";
    case ProbeKind::TimestepEncoderHidden: return "timestep-encoder-hidden";
  }
  return "?";
}

ProbeDataset make_probe_dataset(const std::vector<ActivationTrace>& traces, ProbeKind kind,
                                const ProbeConfig& cfg) {
  if (traces.empty()) throw std::invalid_argument("make_probe_dataset: no traces");
  std::vector<const double*> rows;
  std::vector<int> labels;
  std::size_t units = 0;

  for (const auto& tr : traces) {
    switch (kind) {
      case ProbeKind::TableEncoderHidden:
        units = tr.enc_h.cols();
        for (std::size_t i = 0; i < tr.enc_h.rows(); ++i)
          if (tr.enc_table[i] >= 0) {
            rows.push_back(tr.enc_h.row(i));
            labels.push_back(tr.enc_table[i]);
          }
        break;
      case ProbeKind::TableDecoderUpdateGate:
      case ProbeKind::TableDecoderResetGate: {
        const auto& m =
            kind == ProbeKind::TableDecoderUpdateGate ? tr.dec_z : tr.dec_r;
        units = m.cols();
        for (std::size_t t = 0; t < m.rows(); ++t)
          if (tr.dec_table[t] >= 0) {
            rows.push_back(m.row(t));
            labels.push_back(tr.dec_table[t]);
          }
        break;
      }
      case ProbeKind::TimestepEncoderHidden:
        units = tr.enc_h.cols();
        for (std::size_t i = 0; i < tr.enc_h.rows(); ++i) {
          rows.push_back(tr.enc_h.row(i));
          labels.push_back(static_cast<int>(i));
        }
        break;
    }
  }
  if (rows.empty()) throw std::invalid_argument("make_probe_dataset: no labeled rows");

  ProbeDataset data;
  data.x = num::Matrix(rows.size(), units);
  data.labels = labels;
  for (std::size_t r = 0; r < rows.size(); ++r)
    std::copy_n(rows[r], units, data.x.row(r));
  data.n_classes = static_cast<std::size_t>(*std::max_element(labels.begin(), labels.end())) + 1;
  if (data.n_classes < 2)
    throw std::invalid_argument("make_probe_dataset: degenerate single-class labels");

  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), 0);
  num::Rng rng = num::Rng(cfg.seed).child("probe-split");
  rng.shuffle(order);
  const std::size_t n_eval = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(cfg.eval_fraction * double(order.size()))));
  data.eval_rows.assign(order.begin(), order.begin() + n_eval);
  data.train_rows.assign(order.begin() + n_eval, order.end());
  return data;
}

int LinearProbe::predict(const double* x, const std::vector<std::size_t>& units) const {
  int best = 0;
  double best_v = -1e300;
  for (std::size_t c = 0; c < w.rows(); ++c) {
    double v = b[c];
    const double* wr = w.row(c);
    for (std::size_t k = 0; k < units.size(); ++k) v += wr[k] * x[units[k]];
    if (v > best_v) {
      best_v = v;
      best = static_cast<int>(c);
    }
  }
  return best;
}

namespace {

// mean cross-entropy and its gradient over a contiguously gathered
// training matrix [n x D]
double probe_loss_grad(const num::Matrix& xr, const std::vector<int>& yr, const num::Matrix& w,
                       const std::vector<double>& b, num::Matrix* gw, std::vector<double>* gb) {
  const std::size_t C = w.rows(), D = w.cols(), n = xr.rows();
  if (gw) {
    gw->fill(0.0);
    std::fill(gb->begin(), gb->end(), 0.0);
  }
  double loss = 0.0;
  std::vector<double> logits(C);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t r = 0; r < n; ++r) {
    const double* __restrict x = xr.row(r);
    for (std::size_t c = 0; c < C; ++c) logits[c] = b[c] + num::dot(w.row(c), x, D);
    num::softmax_inplace(logits);
    const int y = yr[r];
    loss += -std::log(std::max(logits[y], num::kLogFloor));
    if (gw) {
      for (std::size_t c = 0; c < C; ++c) {
        const double delta = (logits[c] - (static_cast<int>(c) == y ? 1.0 : 0.0)) * inv_n;
        (*gb)[c] += delta;
        double* __restrict gr = gw->row(c);
        for (std::size_t k = 0; k < D; ++k) gr[k] += delta * x[k];
      }
    }
  }
  return loss * inv_n;
}

}  // namespace

LinearProbe train_probe(const ProbeDataset& data, const std::vector<std::size_t>& units,
                        const ProbeConfig& cfg) {
  if (data.train_rows.empty()) throw std::invalid_argument("train_probe: no training rows");
  const std::size_t C = data.n_classes, D = units.size();

  num::Matrix xr(data.train_rows.size(), D);
  std::vector<int> yr(data.train_rows.size());
  for (std::size_t i = 0; i < data.train_rows.size(); ++i) {
    const double* src = data.x.row(data.train_rows[i]);
    double* dst = xr.row(i);
    for (std::size_t k = 0; k < D; ++k) dst[k] = src[units[k]];
    yr[i] = data.labels[data.train_rows[i]];
  }

  LinearProbe probe;
  probe.w = num::Matrix(C, D);
  probe.b.assign(C, 0.0);

  num::Matrix gw(C, D);
  std::vector<double> gb(C);
  double loss = probe_loss_grad(xr, yr, probe.w, probe.b, &gw, &gb);
  double lr = 1.0;

  num::Matrix w_try(C, D);
  std::vector<double> b_try(C);
  for (std::size_t it = 0; it < cfg.max_iters; ++it) {
    probe.iters = it + 1;
    bool stepped = false;
    while (lr > 1e-12) {
      for (std::size_t i = 0; i < probe.w.size(); ++i)
        w_try.data()[i] = probe.w.data()[i] - lr * gw.data()[i];
      for (std::size_t c = 0; c < C; ++c) b_try[c] = probe.b[c] - lr * gb[c];
      const double loss_try = probe_loss_grad(xr, yr, w_try, b_try, nullptr, nullptr);
      if (loss_try <= loss) {
        const double delta = loss - loss_try;
        probe.w = w_try;
        probe.b = b_try;
        loss = loss_try;
        stepped = true;
        if (delta < cfg.tol) {
          probe.final_loss = loss;
          return probe;
        }
        lr *= 1.1;
        break;
      }
      lr *= 0.5;
    }
    if (!stepped) break;  // no descent direction at any step size
    probe_loss_grad(xr, yr, probe.w, probe.b, &gw, &gb);
  }
  probe.final_loss = loss;
  return probe;
}

double probe_accuracy(const LinearProbe& probe, const ProbeDataset& data,
                      const std::vector<std::size_t>& units,
                      const std::vector<std::size_t>& rows) {
  if (rows.empty()) return 0.0;
  std::size_t hit = 0;
  for (const std::size_t r : rows)
    if (probe.predict(data.x.row(r), units) == data.labels[r]) ++hit;
  return static_cast<double>(hit) / static_cast<double>(rows.size());
}

std::vector<std::size_t> rank_units(const LinearProbe& probe) {
  std::vector<double> score(probe.w.cols(), 0.0);
  for (std::size_t c = 0; c < probe.w.rows(); ++c)
    for (std::size_t k = 0; k < probe.w.cols(); ++k) score[k] += std::fabs(probe.w(c, k));
  std::vector<std::size_t> idx(score.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
  return idx;
}

ProbeReport functional_group(const ProbeDataset& data, const LinearProbe& full_probe,
                             double full_accuracy, const ProbeConfig& cfg, double ratio) {
  ProbeReport report;
  report.full_accuracy = full_accuracy;
  const auto ranking = rank_units(full_probe);
  const std::size_t D = ranking.size();

  std::vector<std::size_t> sizes;
  for (std::size_t s = 1; s <= std::min<std::size_t>(64, D); ++s) sizes.push_back(s);
  std::size_t s = sizes.empty() ? 1 : sizes.back();
  while (s < D) {
    s = std::min<std::size_t>(D, static_cast<std::size_t>(std::ceil(double(s) * 1.25)));
    sizes.push_back(s);
  }

  const double target = ratio * full_accuracy;
  for (const std::size_t size : sizes) {
    std::vector<std::size_t> prefix(ranking.begin(), ranking.begin() + size);
    const auto restricted = train_probe(data, prefix, cfg);
    const double acc = probe_accuracy(restricted, data, prefix, data.eval_rows);
    report.curve.emplace_back(size, acc);
    if (acc >= target) {
      report.group = std::move(prefix);
      report.group_accuracy = acc;
      return report;
    }
  }
  // fall back to the full unit set (always reaches the target by definition)
  report.group = ranking;
  report.group_accuracy = full_accuracy;
  return report;
}

double top_weight_overlap(const std::vector<std::size_t>& group,
                          const std::vector<double>& strength, double frac) {
  if (group.empty()) return 0.0;
  const auto top = top_fraction(strength, frac);
  const std::set<std::size_t> top_set(top.begin(), top.end());
  std::size_t hit = 0;
  for (const std::size_t u : group) hit += top_set.count(u);
  return static_cast<double>(hit) / static_cast<double>(group.size());
}

}  // namespace aglab::analysis
