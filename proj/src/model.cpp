#include "aglab/model.hpp"

#include <algorithm>
#include <stdexcept>

#include "aglab/ops.hpp"

namespace aglab::seq2seq {

const char* to_string(Mode mode) { return mode == Mode::AG ? "ag" : "baseline"; }

Mode mode_from_string(const std::string& s) {
  if (s == "ag") return Mode::AG;
  if (s == "baseline") return Mode::Baseline;
  throw std::invalid_argument("unknown mode '" + s + "' (expected 'baseline' or 'ag')");
}

AttentionScorer::AttentionScorer(const std::string& prefix, std::size_t hidden,
                                 std::size_t attn_dim)
    : W1(prefix + ".W1", attn_dim, 2 * hidden),
      b1(prefix + ".b1", 1, attn_dim),
      w2(prefix + ".w2", 1, attn_dim) {}

std::vector<num::Parameter*> AttentionScorer::params() { return {&W1, &b1, &w2}; }

Seq2SeqModel::Seq2SeqModel(const ModelConfig& cfg)
    : enc_embedding("encoder.embedding", cfg.enc_vocab, cfg.embed_dim),
      encoder("encoder.gru", cfg.embed_dim, cfg.hidden),
      dec_embedding("decoder.embedding", cfg.dec_vocab, cfg.embed_dim),
      decoder("decoder.gru", cfg.embed_dim, cfg.hidden),
      attention("decoder.attention", cfg.hidden, cfg.attn_dim),
      combine_w("decoder.combine.weight", cfg.hidden, 2 * cfg.hidden),
      combine_b("decoder.combine.bias", 1, cfg.hidden),
      out_proj_w("decoder.out_proj.weight", cfg.dec_vocab, cfg.hidden),
      out_proj_b("decoder.out_proj.bias", 1, cfg.dec_vocab),
      cfg_(cfg) {}

std::vector<num::Parameter*> Seq2SeqModel::params() {
  std::vector<num::Parameter*> out{&enc_embedding};
  for (auto* p : encoder.params()) out.push_back(p);
  out.push_back(&dec_embedding);
  for (auto* p : decoder.params()) out.push_back(p);
  for (auto* p : attention.params()) out.push_back(p);
  out.push_back(&combine_w);
  out.push_back(&combine_b);
  out.push_back(&out_proj_w);
  out.push_back(&out_proj_b);
  return out;
}

std::vector<const num::Parameter*> Seq2SeqModel::params() const {
  std::vector<const num::Parameter*> out;
  for (auto* p : const_cast<Seq2SeqModel*>(this)->params()) out.push_back(p);
  return out;
}

num::Parameter& Seq2SeqModel::param(const std::string& name) {
  for (auto* p : params())
    if (p->name == name) return *p;
  throw std::invalid_argument("no parameter named '" + name + "'");
}

void Seq2SeqModel::init_params(num::Rng& rng, double scale) {
  for (auto* p : params()) {
    const bool is_bias = p->name.find(".b_") != std::string::npos ||
                         p->name.ends_with(".b1") || p->name.ends_with(".bias");
    if (is_bias) {
      p->value.fill(0.0);
      continue;
    }
    double* d = p->value.data();
    for (std::size_t i = 0; i < p->value.size(); ++i) d[i] = rng.uniform(-scale, scale);
  }
}

void Seq2SeqModel::zero_grads() {
  for (auto* p : params()) p->zero_grad();
}

void Seq2SeqModel::unfreeze_all() {
  for (auto* p : params()) p->frozen = false;
}

TokenizedExample tokenize(const task::Example& ex, const task::Vocab& enc_vocab,
                          const task::Vocab& dec_vocab) {
  TokenizedExample out;
  for (const auto& t : ex.input) out.enc.push_back(enc_vocab.id(t));
  for (const auto& t : ex.target) out.target.push_back(dec_vocab.id(t));
  out.attention = ex.attention;
  return out;
}

EncodeNodes encode_graph(num::Tape& tape, Seq2SeqModel& model,
                         const std::vector<std::size_t>& tokens) {
  if (tokens.empty()) throw std::invalid_argument("encode: empty input");
  EncodeNodes enc;
  num::NodeId h = tape.input(std::vector<double>(model.hidden(), 0.0));
  for (std::size_t tok : tokens) {
    auto x = tape.embed(model.enc_embedding, tok);
    auto step = gru_step(tape, model.encoder, x, h);
    h = step.h;
    enc.h.push_back(step.h);
    enc.z.push_back(step.z);
    enc.r.push_back(step.r);
    enc.att_proj.push_back(tape.matvec_cols(model.attention.W1, step.h, model.hidden()));
  }
  return enc;
}

AttendNodes attend_graph(num::Tape& tape, Seq2SeqModel& model, num::NodeId s,
                         const EncodeNodes& enc) {
  auto s_proj = tape.matvec_cols(model.attention.W1, s, 0);
  std::vector<num::NodeId> scores;
  scores.reserve(enc.h.size());
  for (std::size_t i = 0; i < enc.h.size(); ++i) {
    auto pre = tape.add_bias(tape.add(s_proj, enc.att_proj[i]), model.attention.b1);
    scores.push_back(tape.matvec(model.attention.w2, tape.tanh(pre)));
  }
  auto weights = tape.softmax(tape.gather(scores));
  auto context = tape.weighted_sum(weights, enc.h);
  return {weights, context};
}

DecodeStepNodes decode_step_graph(num::Tape& tape, Seq2SeqModel& model, std::size_t prev_token,
                                  num::NodeId s_prev, const EncodeNodes& enc) {
  auto x = tape.embed(model.dec_embedding, prev_token);
  auto step = gru_step(tape, model.decoder, x, s_prev);
  auto att = attend_graph(tape, model, step.h, enc);
  auto combined = tape.tanh(
      tape.add_bias(tape.add(tape.matvec_cols(model.combine_w, step.h, 0),
                             tape.matvec_cols(model.combine_w, att.context, model.hidden())),
                    model.combine_b));
  auto dist = tape.softmax(tape.add_bias(tape.matvec(model.out_proj_w, combined),
                                         model.out_proj_b));
  return {dist, att.weights, step.h, step.z, step.r};
}

ForwardLoss teacher_forced_loss(num::Tape& tape, Seq2SeqModel& model, const TokenizedExample& ex,
                                std::size_t sos_id, double lambda_ag) {
  if (ex.target.empty()) throw std::invalid_argument("teacher_forced_loss: empty target");
  if (ex.attention.size() != ex.target.size())
    throw std::invalid_argument("teacher_forced_loss: attention/target length mismatch");

  ForwardLoss out;
  out.enc = encode_graph(tape, model, ex.enc);

  const std::size_t T = ex.target.size();
  num::NodeId s = out.enc.h.back();
  std::vector<num::NodeId> nll_terms, ag_terms;
  std::size_t prev = sos_id;
  for (std::size_t t = 0; t < T; ++t) {
    auto step = decode_step_graph(tape, model, prev, s, out.enc);
    s = step.h;
    out.dists.push_back(step.dist);
    out.attns.push_back(step.attn);
    out.dec_h.push_back(step.h);
    out.dec_z.push_back(step.z);
    out.dec_r.push_back(step.r);
    nll_terms.push_back(tape.neg_log_pick(step.dist, ex.target[t]));
    ag_terms.push_back(tape.neg_log_pick(step.attn, ex.attention[t]));
    prev = ex.target[t];  // teacher forcing
  }
  const std::vector<double> inv_t(T, 1.0 / static_cast<double>(T));
  out.nll = tape.linear_combination(nll_terms, inv_t);
  out.ag = tape.linear_combination(ag_terms, inv_t);
  out.total = tape.linear_combination({out.nll, out.ag}, {1.0, lambda_ag});
  return out;
}

EncodeResult encode(Seq2SeqModel& model, const std::vector<std::size_t>& tokens) {
  num::Tape tape(/*recording=*/false);
  auto enc = encode_graph(tape, model, tokens);
  EncodeResult out{num::Matrix(tokens.size(), model.hidden()),
                   num::Matrix(tokens.size(), model.hidden()),
                   num::Matrix(tokens.size(), model.hidden())};
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::copy_n(tape.value(enc.h[i]).data(), model.hidden(), out.h.row(i));
    std::copy_n(tape.value(enc.z[i]).data(), model.hidden(), out.z.row(i));
    std::copy_n(tape.value(enc.r[i]).data(), model.hidden(), out.r.row(i));
  }
  return out;
}

namespace {

// Rebuild encoder-state nodes from a plain matrix so the value-level
// attend/decode_step entry points can reuse the graph builders.
EncodeNodes states_to_nodes(num::Tape& tape, Seq2SeqModel& model, const num::Matrix& enc_states) {
  if (enc_states.rows() == 0) throw std::invalid_argument("attend: no encoder states");
  EncodeNodes enc;
  for (std::size_t i = 0; i < enc_states.rows(); ++i) {
    auto h = tape.input(std::vector<double>(enc_states.row(i), enc_states.row(i) + enc_states.cols()));
    enc.h.push_back(h);
    enc.att_proj.push_back(tape.matvec_cols(model.attention.W1, h, model.hidden()));
  }
  return enc;
}

}  // namespace

AttendResult attend(Seq2SeqModel& model, const std::vector<double>& s,
                    const num::Matrix& enc_states) {
  num::Tape tape(/*recording=*/false);
  auto enc = states_to_nodes(tape, model, enc_states);
  auto att = attend_graph(tape, model, tape.input(s), enc);
  return {tape.value(att.weights), tape.value(att.context)};
}

DecodeStepResult decode_step(Seq2SeqModel& model, std::size_t prev_token,
                             const std::vector<double>& s_prev, const num::Matrix& enc_states) {
  num::Tape tape(/*recording=*/false);
  auto enc = states_to_nodes(tape, model, enc_states);
  auto step = decode_step_graph(tape, model, prev_token, tape.input(s_prev), enc);
  return {tape.value(step.dist), tape.value(step.attn), tape.value(step.h), tape.value(step.z),
          tape.value(step.r)};
}

GreedyResult greedy_decode(Seq2SeqModel& model, const std::vector<std::size_t>& enc_tokens,
                           std::size_t sos_id, std::size_t eos_id, std::size_t max_steps) {
  num::Tape tape(/*recording=*/false);
  auto enc = encode_graph(tape, model, enc_tokens);

  GreedyResult out;
  std::vector<std::vector<double>> attn_rows, h_rows, z_rows, r_rows;
  num::NodeId s = enc.h.back();
  std::size_t prev = sos_id;
  for (std::size_t t = 0; t < max_steps; ++t) {
    auto step = decode_step_graph(tape, model, prev, s, enc);
    s = step.h;
    attn_rows.push_back(tape.value(step.attn));
    h_rows.push_back(tape.value(step.h));
    z_rows.push_back(tape.value(step.z));
    r_rows.push_back(tape.value(step.r));
    const auto& dist = tape.value(step.dist);
    const std::size_t tok =
        std::max_element(dist.begin(), dist.end()) - dist.begin();
    if (tok == eos_id) {
      out.ended_with_eos = true;
      break;
    }
    out.tokens.push_back(tok);
    prev = tok;
  }

  const std::size_t steps = attn_rows.size();
  out.attn = num::Matrix(steps, enc_tokens.size());
  out.dec_h = num::Matrix(steps, model.hidden());
  out.dec_z = num::Matrix(steps, model.hidden());
  out.dec_r = num::Matrix(steps, model.hidden());
  for (std::size_t t = 0; t < steps; ++t) {
    std::copy(attn_rows[t].begin(), attn_rows[t].end(), out.attn.row(t));
    std::copy(h_rows[t].begin(), h_rows[t].end(), out.dec_h.row(t));
    std::copy(z_rows[t].begin(), z_rows[t].end(), out.dec_z.row(t));
    std::copy(r_rows[t].begin(), r_rows[t].end(), out.dec_r.row(t));
  }
  return out;
}

double ag_loss(const num::Matrix& predicted, const num::Matrix& target) {
  if (!predicted.same_shape(target))
    throw num::ShapeError("ag_loss: predicted " + predicted.shape_str() + " vs target " +
                          target.shape_str());
  if (predicted.rows() == 0) return 0.0;
  double total = 0.0;
  for (std::size_t t = 0; t < predicted.rows(); ++t)
    for (std::size_t i = 0; i < predicted.cols(); ++i) {
      const double w = target(t, i);
      if (w == 0.0) continue;
      total += w * -std::log(std::max(predicted(t, i), num::kLogFloor));
    }
  return total / static_cast<double>(predicted.rows());
}

double ag_loss(const num::Matrix& predicted, const std::vector<std::size_t>& positions) {
  num::Matrix target(predicted.rows(), predicted.cols());
  if (positions.size() != predicted.rows())
    throw num::ShapeError("ag_loss: one target position per row required");
  for (std::size_t t = 0; t < predicted.rows(); ++t) target(t, positions[t]) = 1.0;
  return ag_loss(predicted, target);
}

}  // namespace aglab::seq2seq
