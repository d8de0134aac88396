#pragma once

#include <string>
#include <vector>

#include "aglab/dataset.hpp"
#include "aglab/gru.hpp"
#include "aglab/matrix.hpp"
#include "aglab/param.hpp"
#include "aglab/rng.hpp"
#include "aglab/tape.hpp"

namespace aglab::seq2seq {

/// Training-mode tag. Baseline and guided models are architecturally
/// identical; the tag only selects whether the attention loss term is
/// weighted into training.
enum class Mode { Baseline, AG };

const char* to_string(Mode mode);
Mode mode_from_string(const std::string& s);

struct ModelConfig {
  std::size_t enc_vocab = 16;
  std::size_t dec_vocab = 11;
  std::size_t embed_dim = 16;
  std::size_t hidden = 512;
  std::size_t attn_dim = 512;
  Mode mode = Mode::Baseline;

  bool operator==(const ModelConfig&) const = default;
};

/// MLP attention scorer: score(s, h_i) = w2 · tanh(W1 [s; h_i] + b1).
/// W1 columns [0, hidden) act on the decoder state, [hidden, 2*hidden)
/// on an encoder state.
struct AttentionScorer {
  num::Parameter W1;  // [attn_dim x 2*hidden]
  num::Parameter b1;  // [1 x attn_dim]
  num::Parameter w2;  // [1 x attn_dim]

  AttentionScorer() = default;
  AttentionScorer(const std::string& prefix, std::size_t hidden, std::size_t attn_dim);
  std::vector<num::Parameter*> params();
};

/// Encoder-decoder GRU with MLP attention. The context vector enters
/// after the decoder GRU: combined_t = tanh(C [s_t; ctx_t] + b_c), and
/// dist = softmax(P combined_t + b). The GRU equations stay untouched.
class Seq2SeqModel {
 public:
  explicit Seq2SeqModel(const ModelConfig& cfg);

  const ModelConfig& config() const { return cfg_; }
  Mode mode() const { return cfg_.mode; }
  void set_mode(Mode m) { cfg_.mode = m; }
  std::size_t hidden() const { return cfg_.hidden; }

  num::Parameter enc_embedding;  // [enc_vocab x embed_dim]
  GruCell encoder;
  num::Parameter dec_embedding;  // [dec_vocab x embed_dim]
  GruCell decoder;
  AttentionScorer attention;
  num::Parameter combine_w;   // [hidden x 2*hidden], cols [0,H) read s_t, [H,2H) read ctx_t
  num::Parameter combine_b;   // [1 x hidden]
  num::Parameter out_proj_w;  // [dec_vocab x hidden]
  num::Parameter out_proj_b;  // [1 x dec_vocab]

  /// Every parameter in its fixed manifest order.
  std::vector<num::Parameter*> params();
  std::vector<const num::Parameter*> params() const;
  num::Parameter& param(const std::string& name);

  /// Weights uniform(-scale, scale), biases zero.
  void init_params(num::Rng& rng, double scale = 0.08);

  void zero_grads();
  void unfreeze_all();

 private:
  ModelConfig cfg_;
};

struct TokenizedExample {
  std::vector<std::size_t> enc;
  std::vector<std::size_t> target;     // includes <eos>
  std::vector<std::size_t> attention;  // one input position per decoder step
};

TokenizedExample tokenize(const task::Example& ex, const task::Vocab& enc_vocab,
                          const task::Vocab& dec_vocab);

// ---- graph-building forward passes --------------------------------------

struct EncodeNodes {
  std::vector<num::NodeId> h, z, r;
  std::vector<num::NodeId> att_proj;  // W1[:, hidden:2*hidden] h_i, computed once per position
};

EncodeNodes encode_graph(num::Tape& tape, Seq2SeqModel& model,
                         const std::vector<std::size_t>& tokens);

struct AttendNodes {
  num::NodeId weights;  // softmax over encoder positions
  num::NodeId context;  // sum_i a_i h_i
};

AttendNodes attend_graph(num::Tape& tape, Seq2SeqModel& model, num::NodeId s,
                         const EncodeNodes& enc);

struct DecodeStepNodes {
  num::NodeId dist, attn, h, z, r;
};

DecodeStepNodes decode_step_graph(num::Tape& tape, Seq2SeqModel& model, std::size_t prev_token,
                                  num::NodeId s_prev, const EncodeNodes& enc);

struct ForwardLoss {
  num::NodeId total, nll, ag;
  EncodeNodes enc;
  std::vector<num::NodeId> dists, attns, dec_h, dec_z, dec_r;
};

/// Teacher-forced loss graph: mean token NLL over decoder steps plus
/// lambda_ag times the attention cross-entropy term.
ForwardLoss teacher_forced_loss(num::Tape& tape, Seq2SeqModel& model, const TokenizedExample& ex,
                                std::size_t sos_id, double lambda_ag);

// ---- value-level operations ----------------------------------------------

struct EncodeResult {
  num::Matrix h, z, r;  // [steps x hidden]
};

EncodeResult encode(Seq2SeqModel& model, const std::vector<std::size_t>& tokens);

struct AttendResult {
  std::vector<double> weights;
  std::vector<double> context;
};

AttendResult attend(Seq2SeqModel& model, const std::vector<double>& s,
                    const num::Matrix& enc_states);

struct DecodeStepResult {
  std::vector<double> dist, attn, h, z, r;
};

DecodeStepResult decode_step(Seq2SeqModel& model, std::size_t prev_token,
                             const std::vector<double>& s_prev, const num::Matrix& enc_states);

struct GreedyResult {
  std::vector<std::size_t> tokens;  // emitted before <eos>
  bool ended_with_eos = false;
  num::Matrix attn;                 // [steps x input_len], includes the <eos> step
  num::Matrix dec_h, dec_z, dec_r;  // [steps x hidden]
};

GreedyResult greedy_decode(Seq2SeqModel& model, const std::vector<std::size_t>& enc_tokens,
                           std::size_t sos_id, std::size_t eos_id, std::size_t max_steps);

/// (1/T) sum_t sum_i -target(t,i) log max(predicted(t,i), floor).
double ag_loss(const num::Matrix& predicted, const num::Matrix& target);

/// One-hot target convenience: positions[t] is the attended input index.
double ag_loss(const num::Matrix& predicted, const std::vector<std::size_t>& positions);

}  // namespace aglab::seq2seq
