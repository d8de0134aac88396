#pragma once

#include <filesystem>
#include <vector>

#include "aglab/dataset.hpp"
#include "aglab/matrix.hpp"
#include "aglab/model.hpp"

namespace aglab::analysis {

enum class Half { Encoder, Decoder };
enum class Gate { Update, Reset };

const char* to_string(Half h);
const char* to_string(Gate g);

/// Per-example record of hidden states, gate activations and attention
/// rows, captured under teacher forcing so step semantics are identical
/// for both model modes. Label metadata marks which table (0-based) is
/// read at an encoder step / applied at a decoder step, -1 otherwise.
struct ActivationTrace {
  std::size_t example_index = 0;
  num::Matrix enc_h, enc_z, enc_r;  // [input_len x hidden]
  num::Matrix dec_h, dec_z, dec_r;  // [target_len x hidden]
  num::Matrix attn;                 // [target_len x input_len]
  std::vector<int> enc_table;
  std::vector<int> dec_table;
};

std::vector<ActivationTrace> capture_traces(seq2seq::Seq2SeqModel& model,
                                            const std::vector<task::Example>& examples,
                                            const task::Vocab& enc_vocab,
                                            const task::Vocab& dec_vocab);

/// Archives: <stem>.json manifest plus <stem>.bin little-endian f64 blob.
void write_traces(const std::vector<ActivationTrace>& traces,
                  const std::filesystem::path& stem);
std::vector<ActivationTrace> read_traces(const std::filesystem::path& stem);

}  // namespace aglab::analysis
