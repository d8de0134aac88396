#pragma once

#include <filesystem>

#include "aglab/model.hpp"

namespace aglab::seq2seq {

/// Writes <stem>.json (manifest: mode tag, config echo, tensor table)
/// and <stem>.bin (little-endian raw f64 blob). Round trips bit-exactly.
void save_checkpoint(const Seq2SeqModel& model, const std::filesystem::path& stem);

Seq2SeqModel load_checkpoint(const std::filesystem::path& stem);

}  // namespace aglab::seq2seq
