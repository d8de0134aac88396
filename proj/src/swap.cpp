#include "aglab/swap.hpp"

namespace aglab::ablate {

SwapRunResult substitute_and_retrain(const seq2seq::Seq2SeqModel& host,
                                     const seq2seq::Seq2SeqModel& donor, ComponentKind kind,
                                     const task::DatasetBundle& data,
                                     seq2seq::TrainingConfig cfg,
                                     seq2seq::Seq2SeqModel* retrained) {
  if (host.config().hidden != donor.config().hidden ||
      host.config().embed_dim != donor.config().embed_dim ||
      host.config().enc_vocab != donor.config().enc_vocab ||
      host.config().dec_vocab != donor.config().dec_vocab ||
      host.config().attn_dim != donor.config().attn_dim)
    throw num::ShapeError("substitute_and_retrain: host and donor architectures differ");

  seq2seq::Seq2SeqModel model = host;
  model.unfreeze_all();
  implant_component(model, extract_component(donor, kind), /*freeze=*/true);

  SwapRunResult result;
  result.seed = cfg.seed;
  try {
    const auto tr = seq2seq::train(model, data, cfg);
    result.epochs_run = tr.history.size();
  } catch (const seq2seq::NumericalError&) {
    result.diverged = true;
  }
  for (const auto& name : {"heldout_compositions", "heldout_inputs", "heldout_tables",
                           "new_compositions"}) {
    result.split_accuracy[name] =
        result.diverged
            ? 0.0
            : seq2seq::evaluate(model, data.split(name), data.enc_vocab, data.dec_vocab);
  }
  if (retrained) *retrained = model;
  return result;
}

}  // namespace aglab::ablate
