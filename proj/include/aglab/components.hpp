#pragma once

#include <map>
#include <string>
#include <vector>

#include "aglab/model.hpp"

namespace aglab::ablate {

/// The eight swappable component kinds. Wih bundles the input-to-hidden
/// gate matrices of a cell, Whh the recurrent ones; bias rows stay with
/// the host in both cases. Encoder/Decoder bundle everything in that
/// half, the decoder side including the attention scorer and output
/// projection.
enum class ComponentKind {
  Encoder,
  Decoder,
  EncoderEmbedding,
  DecoderEmbedding,
  EncoderWih,
  EncoderWhh,
  DecoderWih,
  DecoderWhh,
};

const char* to_string(ComponentKind k);
ComponentKind component_from_string(const std::string& s);
const std::vector<ComponentKind>& all_component_kinds();

std::vector<std::string> component_tensor_names(ComponentKind kind);

/// Tensors addressed by manifest name.
std::map<std::string, num::Matrix> extract_component(const seq2seq::Seq2SeqModel& model,
                                                     ComponentKind kind);

/// Copies donor tensors into the host, optionally freezing them; shapes
/// must match the host architecture.
void implant_component(seq2seq::Seq2SeqModel& model,
                       const std::map<std::string, num::Matrix>& tensors, bool freeze);

}  // namespace aglab::ablate
