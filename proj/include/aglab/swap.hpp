#pragma once

#include <map>
#include <string>

#include "aglab/components.hpp"
#include "aglab/train.hpp"

namespace aglab::ablate {

struct SwapRunResult {
  std::uint64_t seed = 0;
  bool diverged = false;
  std::map<std::string, double> split_accuracy;  // keyed by split name
  std::size_t epochs_run = 0;
};

/// Implants the donor's component into a copy of the host (frozen) and
/// retrains the rest with the host's original loss; returns accuracies
/// on all four test splits. The retrained model is written back through
/// `retrained` when non-null. Divergence is recorded, not thrown.
SwapRunResult substitute_and_retrain(const seq2seq::Seq2SeqModel& host,
                                     const seq2seq::Seq2SeqModel& donor, ComponentKind kind,
                                     const task::DatasetBundle& data,
                                     seq2seq::TrainingConfig cfg,
                                     seq2seq::Seq2SeqModel* retrained = nullptr);

}  // namespace aglab::ablate
