#include "aglab/prune.hpp"

#include <cmath>
#include <stdexcept>

#include "aglab/strength.hpp"

namespace aglab::ablate {

std::size_t PruneMask::kept_encoder() const {
  std::size_t n = 0;
  for (bool b : keep_enc) n += b;
  return n;
}

std::size_t PruneMask::kept_decoder() const {
  std::size_t n = 0;
  for (bool b : keep_dec) n += b;
  return n;
}

PruneMask make_prune_mask(const std::vector<double>& strength_enc,
                          const std::vector<double>& strength_dec, double keep_frac,
                          bool allow_empty) {
  if (keep_frac < 0.0 || keep_frac > 1.0)
    throw std::invalid_argument("make_prune_mask: keep_frac outside [0,1]");
  PruneMask mask;
  mask.keep_frac = keep_frac;
  mask.keep_enc.assign(strength_enc.size(), false);
  mask.keep_dec.assign(strength_dec.size(), false);
  for (const auto u : analysis::top_fraction(strength_enc, keep_frac)) mask.keep_enc[u] = true;
  for (const auto u : analysis::top_fraction(strength_dec, keep_frac)) mask.keep_dec[u] = true;
  if (!allow_empty && (mask.kept_encoder() == 0 || mask.kept_decoder() == 0))
    throw std::invalid_argument(
        "make_prune_mask: keep_frac leaves no units; pass allow_empty to force");
  return mask;
}

namespace {

// Visits every weight entry incident to a masked unit. The same walk
// drives zeroing values, suppressing gradients, and verification.
template <typename Fn>
void for_each_masked_entry(seq2seq::Seq2SeqModel& model, const PruneMask& mask, bool values,
                           Fn&& fn) {
  const std::size_t H = model.hidden();
  auto grid = [&](num::Parameter& p) -> num::Matrix& { return values ? p.value : p.grad; };

  auto half_pass = [&](seq2seq::GruCell& cell, const std::vector<bool>& keep,
                       std::size_t tail_col0) {
    for (auto* w : {&cell.W_iz, &cell.W_ir, &cell.W_ih}) {
      num::Matrix& m = grid(*w);
      for (std::size_t u = 0; u < H; ++u)
        if (!keep[u])
          for (std::size_t k = 0; k < m.cols(); ++k) fn(m(u, k));
    }
    for (auto* w : {&cell.W_hz, &cell.W_hr, &cell.W_hh}) {
      num::Matrix& m = grid(*w);
      for (std::size_t u = 0; u < H; ++u) {
        if (!keep[u])
          for (std::size_t k = 0; k < m.cols(); ++k) fn(m(u, k));  // incoming row
        for (std::size_t i = 0; i < m.rows(); ++i)
          if (!keep[u]) fn(m(i, u));  // outgoing column
      }
    }
    for (auto* b : {&cell.b_z, &cell.b_r, &cell.b_h}) {
      num::Matrix& m = grid(*b);
      for (std::size_t u = 0; u < H; ++u)
        if (!keep[u]) fn(m(0, u));
    }
    num::Matrix& w1 = grid(model.attention.W1);
    num::Matrix& comb = grid(model.combine_w);
    for (std::size_t u = 0; u < H; ++u) {
      if (keep[u]) continue;
      for (std::size_t i = 0; i < w1.rows(); ++i) fn(w1(i, tail_col0 + u));
      for (std::size_t i = 0; i < comb.rows(); ++i) fn(comb(i, tail_col0 + u));
    }
  };

  half_pass(model.encoder, mask.keep_enc, H);  // encoder states sit in [H, 2H)
  half_pass(model.decoder, mask.keep_dec, 0);
}

}  // namespace

void apply_prune_mask(seq2seq::Seq2SeqModel& model, const PruneMask& mask) {
  for_each_masked_entry(model, mask, /*values=*/true, [](double& w) { w = 0.0; });
}

void suppress_masked_grads(seq2seq::Seq2SeqModel& model, const PruneMask& mask) {
  for_each_masked_entry(model, mask, /*values=*/false, [](double& g) { g = 0.0; });
}

bool mask_respected(const seq2seq::Seq2SeqModel& model, const PruneMask& mask) {
  bool ok = true;
  for_each_masked_entry(const_cast<seq2seq::Seq2SeqModel&>(model), mask, /*values=*/true,
                        [&](double& w) { ok = ok && w == 0.0; });
  return ok;
}

PruneResult prune_model(seq2seq::Seq2SeqModel& model, const task::DatasetBundle& data,
                        double keep_frac, bool allow_empty) {
  PruneResult result;
  result.mask = make_prune_mask(analysis::neuron_strength(model, analysis::Half::Encoder),
                                analysis::neuron_strength(model, analysis::Half::Decoder),
                                keep_frac, allow_empty);
  apply_prune_mask(model, result.mask);
  for (const auto& name : {"heldout_compositions", "heldout_inputs", "heldout_tables",
                           "new_compositions"})
    result.split_accuracy[name] =
        seq2seq::evaluate(model, data.split(name), data.enc_vocab, data.dec_vocab);
  return result;
}

RetrainResult retrain_pruned(seq2seq::Seq2SeqModel& model, const PruneMask& mask,
                             const task::DatasetBundle& data, seq2seq::TrainingConfig cfg) {
  RetrainResult result;
  const auto tr = seq2seq::train(
      model, data, cfg, [&mask](seq2seq::Seq2SeqModel& m) { suppress_masked_grads(m, mask); });
  result.epochs_run = tr.history.size();
  result.mask_respected = mask_respected(model, mask);
  for (const auto& name : {"heldout_compositions", "heldout_inputs", "heldout_tables",
                           "new_compositions"})
    result.split_accuracy[name] =
        seq2seq::evaluate(model, data.split(name), data.enc_vocab, data.dec_vocab);
  return result;
}

}  // namespace aglab::ablate
