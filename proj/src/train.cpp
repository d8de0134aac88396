#include "aglab/train.hpp"

#include <cmath>
#include <cstdio>

#include "aglab/adam.hpp"

namespace aglab::seq2seq {

namespace {

std::vector<std::string> greedy_decode_tokens(Seq2SeqModel& model, const task::Example& ex,
                                              const task::Vocab& enc_vocab,
                                              const task::Vocab& dec_vocab) {
  std::vector<std::size_t> enc_ids;
  enc_ids.reserve(ex.input.size());
  for (const auto& t : ex.input) enc_ids.push_back(enc_vocab.id(t));
  const auto res = greedy_decode(model, enc_ids, dec_vocab.id(task::kSosToken),
                                 dec_vocab.id(task::kEosToken), ex.input.size() + 2);
  std::vector<std::string> toks;
  toks.reserve(res.tokens.size());
  for (auto id : res.tokens) toks.push_back(dec_vocab.token(id));
  return toks;
}

}  // namespace

double evaluate_with(const DecodeFn& decode, const std::vector<task::Example>& split) {
  if (split.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& ex : split) {
    const auto decoded = decode(ex);
    // target minus the terminal <eos>
    const std::size_t want = ex.target.size() - 1;
    if (decoded.size() != want) continue;
    bool ok = true;
    for (std::size_t i = 0; i < want && ok; ++i) ok = decoded[i] == ex.target[i];
    correct += ok;
  }
  return static_cast<double>(correct) / static_cast<double>(split.size());
}

double evaluate(Seq2SeqModel& model, const std::vector<task::Example>& split,
                const task::Vocab& enc_vocab, const task::Vocab& dec_vocab) {
  return evaluate_with(
      [&](const task::Example& ex) {
        return greedy_decode_tokens(model, ex, enc_vocab, dec_vocab);
      },
      split);
}

double mean_loss(Seq2SeqModel& model, const std::vector<task::Example>& split,
                 const task::Vocab& enc_vocab, const task::Vocab& dec_vocab, double lambda_ag) {
  if (split.empty()) return 0.0;
  double total = 0.0;
  num::Tape tape(/*recording=*/false);
  for (const auto& ex : split) {
    tape.reset();
    const auto tok = tokenize(ex, enc_vocab, dec_vocab);
    const auto fwd =
        teacher_forced_loss(tape, model, tok, dec_vocab.id(task::kSosToken), lambda_ag);
    total += tape.value(fwd.total)[0];
  }
  return total / static_cast<double>(split.size());
}

TrainResult train(Seq2SeqModel& model, const task::DatasetBundle& data,
                  const TrainingConfig& cfg,
                  const std::function<void(Seq2SeqModel&)>& grad_hook) {
  if (data.train.empty()) throw std::invalid_argument("train: empty training split");
  if (cfg.batch_size == 0) throw std::invalid_argument("train: batch_size must be >= 1");
  if (cfg.max_epochs == 0 || cfg.max_epochs > 100)
    throw std::invalid_argument("train: max_epochs must be in [1, 100]");

  num::Rng rng = num::Rng(cfg.seed).child("train");
  const std::size_t sos_id = data.dec_vocab.id(task::kSosToken);
  const double lambda = model.mode() == Mode::AG ? cfg.lambda_ag : 0.0;

  // seeded validation carve-out for model selection
  std::vector<std::size_t> order(data.train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  {
    num::Rng carve = num::Rng(cfg.seed).child("val-split");
    carve.shuffle(order);
  }
  std::size_t n_val = static_cast<std::size_t>(
      std::llround(cfg.val_fraction * static_cast<double>(data.train.size())));
  n_val = std::min(std::max<std::size_t>(n_val, 1), data.train.size() - 1);
  std::vector<task::Example> val_set;
  std::vector<std::size_t> fit_idx;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i < n_val)
      val_set.push_back(data.train[order[i]]);
    else
      fit_idx.push_back(order[i]);
  }

  std::vector<TokenizedExample> tokenized;
  tokenized.reserve(data.train.size());
  for (const auto& ex : data.train)
    tokenized.push_back(tokenize(ex, data.enc_vocab, data.dec_vocab));

  auto params = model.params();
  num::AdamState adam(params, cfg.lr);

  TrainResult result;
  std::vector<num::Matrix> best_values;
  double best_acc = -1.0, best_loss = 0.0;
  std::size_t since_best = 0;

  num::Tape tape(/*recording=*/true);
  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    rng.shuffle(fit_idx);
    double sum_total = 0, sum_nll = 0, sum_ag = 0;
    std::size_t in_batch = 0;
    model.zero_grads();
    for (std::size_t k = 0; k < fit_idx.size(); ++k) {
      tape.reset();
      const auto fwd = teacher_forced_loss(tape, model, tokenized[fit_idx[k]], sos_id, lambda);
      const double total = tape.value(fwd.total)[0];
      if (!std::isfinite(total))
        throw NumericalError("training diverged: non-finite loss at epoch " +
                             std::to_string(epoch) + ", example " + std::to_string(k));
      sum_total += total;
      sum_nll += tape.value(fwd.nll)[0];
      sum_ag += tape.value(fwd.ag)[0];
      tape.backward(fwd.total);
      ++in_batch;
      const bool flush = in_batch == cfg.batch_size || k + 1 == fit_idx.size();
      if (!flush) continue;
      if (in_batch > 1) {
        const double scale = 1.0 / static_cast<double>(in_batch);
        for (auto* p : params) {
          if (p->frozen) continue;
          double* g = p->grad.data();
          for (std::size_t i = 0; i < p->grad.size(); ++i) g[i] *= scale;
        }
      }
      if (grad_hook) grad_hook(model);
      adam.step();
      model.zero_grads();
      in_batch = 0;
    }

    EpochStats stats;
    stats.epoch = epoch;
    const double n_fit = static_cast<double>(fit_idx.size());
    stats.train_total = sum_total / n_fit;
    stats.train_nll = sum_nll / n_fit;
    stats.train_ag = sum_ag / n_fit;
    stats.val_acc = evaluate(model, val_set, data.enc_vocab, data.dec_vocab);
    stats.val_loss = mean_loss(model, val_set, data.enc_vocab, data.dec_vocab, lambda);

    const bool better =
        stats.val_acc > best_acc || (stats.val_acc == best_acc && stats.val_loss < best_loss);
    if (better) {
      best_acc = stats.val_acc;
      best_loss = stats.val_loss;
      result.best_epoch = epoch;
      best_values.clear();
      for (const auto* p : params) best_values.push_back(p->value);
      stats.selected = true;
      since_best = 0;
    } else {
      ++since_best;
    }
    result.history.push_back(stats);
    if (cfg.verbose)
      std::fprintf(stderr, "epoch %3zu  loss %.4f  nll %.4f  ag %.4f  val_acc %.3f%s\n", epoch,
                   stats.train_total, stats.train_nll, stats.train_ag, stats.val_acc,
                   stats.selected ? "  *" : "");
    if (since_best >= cfg.patience) break;
  }

  if (!best_values.empty()) {
    for (std::size_t i = 0; i < params.size(); ++i) params[i]->value = best_values[i];
  }
  result.best_val_acc = best_acc;
  result.best_val_loss = best_loss;
  return result;
}

}  // namespace aglab::seq2seq
