#include "aglab/components.hpp"

#include <stdexcept>

namespace aglab::ablate {

const char* to_string(ComponentKind k) {
  switch (k) {
    case ComponentKind::Encoder: return "encoder";
    case ComponentKind::Decoder: return "decoder";
    case ComponentKind::EncoderEmbedding: return "encoder-embedding";
    case ComponentKind::DecoderEmbedding: return "decoder-embedding";
    case ComponentKind::EncoderWih: return "encoder-wih";
    case ComponentKind::EncoderWhh: return "encoder-whh";
    case ComponentKind::DecoderWih: return "decoder-wih";
    case ComponentKind::DecoderWhh: return "decoder-whh";
  }
  return "?";
}

ComponentKind component_from_string(const std::string& s) {
  for (const auto k : all_component_kinds())
    if (s == to_string(k)) return k;
  throw std::invalid_argument("unknown component '" + s + "'");
}

const std::vector<ComponentKind>& all_component_kinds() {
  static const std::vector<ComponentKind> kinds{
      ComponentKind::Encoder,     ComponentKind::Decoder,
      ComponentKind::EncoderEmbedding, ComponentKind::DecoderEmbedding,
      ComponentKind::EncoderWih,  ComponentKind::EncoderWhh,
      ComponentKind::DecoderWih,  ComponentKind::DecoderWhh};
  return kinds;
}

std::vector<std::string> component_tensor_names(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::Encoder:
      return {"encoder.embedding", "encoder.gru.W_iz", "encoder.gru.W_ir", "encoder.gru.W_ih",
              "encoder.gru.W_hz", "encoder.gru.W_hr", "encoder.gru.W_hh", "encoder.gru.b_z",
              "encoder.gru.b_r", "encoder.gru.b_h"};
    case ComponentKind::Decoder:
      return {"decoder.embedding", "decoder.gru.W_iz", "decoder.gru.W_ir", "decoder.gru.W_ih",
              "decoder.gru.W_hz", "decoder.gru.W_hr", "decoder.gru.W_hh", "decoder.gru.b_z",
              "decoder.gru.b_r", "decoder.gru.b_h", "decoder.attention.W1",
              "decoder.attention.b1", "decoder.attention.w2", "decoder.combine.weight",
              "decoder.combine.bias", "decoder.out_proj.weight", "decoder.out_proj.bias"};
    case ComponentKind::EncoderEmbedding: return {"encoder.embedding"};
    case ComponentKind::DecoderEmbedding: return {"decoder.embedding"};
    case ComponentKind::EncoderWih:
      return {"encoder.gru.W_iz", "encoder.gru.W_ir", "encoder.gru.W_ih"};
    case ComponentKind::EncoderWhh:
      return {"encoder.gru.W_hz", "encoder.gru.W_hr", "encoder.gru.W_hh"};
    case ComponentKind::DecoderWih:
      return {"decoder.gru.W_iz", "decoder.gru.W_ir", "decoder.gru.W_ih"};
    case ComponentKind::DecoderWhh:
      return {"decoder.gru.W_hz", "decoder.gru.W_hr", "decoder.gru.W_hh"};
  }
  return {};
}

std::map<std::string, num::Matrix> extract_component(const seq2seq::Seq2SeqModel& model,
                                                     ComponentKind kind) {
  auto& m = const_cast<seq2seq::Seq2SeqModel&>(model);
  std::map<std::string, num::Matrix> out;
  for (const auto& name : component_tensor_names(kind)) out[name] = m.param(name).value;
  return out;
}

void implant_component(seq2seq::Seq2SeqModel& model,
                       const std::map<std::string, num::Matrix>& tensors, bool freeze) {
  for (const auto& [name, value] : tensors) {
    auto& p = model.param(name);
    if (!p.value.same_shape(value))
      throw num::ShapeError("implant_component: '" + name + "' host " + p.value.shape_str() +
                            " vs donor " + value.shape_str());
    p.value = value;
    if (freeze) p.frozen = true;
  }
}

}  // namespace aglab::ablate
