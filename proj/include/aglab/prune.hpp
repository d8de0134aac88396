#pragma once

#include <map>
#include <string>
#include <vector>

#include "aglab/model.hpp"
#include "aglab/train.hpp"

namespace aglab::ablate {

/// Per-half keep flags over hidden units. Pruning is masking: removed
/// units keep their dimensions but have every incident weight zeroed.
struct PruneMask {
  std::vector<bool> keep_enc, keep_dec;
  double keep_frac = 1.0;

  std::size_t kept_encoder() const;
  std::size_t kept_decoder() const;
};

/// Keeps the strongest ceil(frac * hidden) units per half. frac = 0
/// (nothing kept) is rejected unless allow_empty.
PruneMask make_prune_mask(const std::vector<double>& strength_enc,
                          const std::vector<double>& strength_dec, double keep_frac,
                          bool allow_empty = false);

/// Zeroes all weights incident to masked units: GRU rows/columns, the
/// unit's bias entries, and its attention-scorer / combine-layer
/// columns.
void apply_prune_mask(seq2seq::Seq2SeqModel& model, const PruneMask& mask);

/// Gradient hook that keeps masked weights at exactly zero during
/// retraining (fresh optimizer state assumed).
void suppress_masked_grads(seq2seq::Seq2SeqModel& model, const PruneMask& mask);

/// True iff every masked-incident weight is exactly zero.
bool mask_respected(const seq2seq::Seq2SeqModel& model, const PruneMask& mask);

/// Mask + immediate evaluation on every test split.
struct PruneResult {
  PruneMask mask;
  std::map<std::string, double> split_accuracy;
};

PruneResult prune_model(seq2seq::Seq2SeqModel& model, const task::DatasetBundle& data,
                        double keep_frac, bool allow_empty = false);

/// Recovery retraining with gradients to masked weights suppressed.
struct RetrainResult {
  std::map<std::string, double> split_accuracy;
  bool mask_respected = false;
  std::size_t epochs_run = 0;
};

RetrainResult retrain_pruned(seq2seq::Seq2SeqModel& model, const PruneMask& mask,
                             const task::DatasetBundle& data, seq2seq::TrainingConfig cfg);

}  // namespace aglab::ablate
