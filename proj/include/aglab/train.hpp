#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "aglab/dataset.hpp"
#include "aglab/model.hpp"

namespace aglab::seq2seq {

/// Raised when training produces a non-finite loss.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrainingConfig {
  std::size_t max_epochs = 100;
  double lr = 0.001;
  std::size_t batch_size = 1;  // online updates
  double lambda_ag = 1.0;      // weight of the attention loss in AG mode
  std::uint64_t seed = 1;
  double val_fraction = 0.10;  // carved from train for model selection
  std::size_t patience = 100;  // epochs without selection improvement; >= max_epochs disables
  bool verbose = false;
};

struct EpochStats {
  std::size_t epoch = 0;
  double train_total = 0, train_nll = 0, train_ag = 0;
  double val_acc = 0, val_loss = 0;
  bool selected = false;
};

using History = std::vector<EpochStats>;

struct TrainResult {
  History history;
  std::size_t best_epoch = 0;
  double best_val_acc = 0;
  double best_val_loss = 0;
};

/// Teacher-forced Adam training with per-epoch model selection: the
/// model is left at the checkpoint with the best validation sequence
/// accuracy (ties broken by lower validation loss). The validation set
/// is a seeded carve-out of the training split, never a test split.
/// `grad_hook` runs after each backward pass, before the optimizer step.
TrainResult train(Seq2SeqModel& model, const task::DatasetBundle& data,
                  const TrainingConfig& cfg,
                  const std::function<void(Seq2SeqModel&)>& grad_hook = {});

using DecodeFn =
    std::function<std::vector<std::string>(const task::Example&)>;

/// Fraction of examples whose decoded sequence (all tokens before <eos>)
/// exactly matches the target.
double evaluate_with(const DecodeFn& decode, const std::vector<task::Example>& split);

/// evaluate_with over greedy decoding of `model`.
double evaluate(Seq2SeqModel& model, const std::vector<task::Example>& split,
                const task::Vocab& enc_vocab, const task::Vocab& dec_vocab);

/// Mean teacher-forced loss over a set of examples (no parameter update).
double mean_loss(Seq2SeqModel& model, const std::vector<task::Example>& split,
                 const task::Vocab& enc_vocab, const task::Vocab& dec_vocab, double lambda_ag);

}  // namespace aglab::seq2seq
