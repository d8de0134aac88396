#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "aglab/components.hpp"
#include "aglab/prune.hpp"
#include "aglab/strength.hpp"
#include "aglab/swap.hpp"

using namespace aglab;
using namespace aglab::ablate;
using seq2seq::Mode;

namespace {

seq2seq::Seq2SeqModel small_model(std::uint64_t seed, Mode mode, std::size_t hidden = 8) {
  seq2seq::ModelConfig cfg;
  cfg.enc_vocab = 16;
  cfg.dec_vocab = 11;
  cfg.embed_dim = 4;
  cfg.hidden = hidden;
  cfg.attn_dim = hidden;
  cfg.mode = mode;
  seq2seq::Seq2SeqModel model(cfg);
  num::Rng rng(seed);
  model.init_params(rng);
  return model;
}

}  // namespace

TEST_CASE("component bundles contain exactly the expected tensors") {
  const auto model = small_model(1, Mode::AG);

  const auto whh = extract_component(model, ComponentKind::EncoderWhh);
  CHECK(whh.size() == 3);  // three recurrent matrices, no biases
  CHECK(whh.count("encoder.gru.W_hz") == 1);
  CHECK(whh.count("encoder.gru.W_hr") == 1);
  CHECK(whh.count("encoder.gru.W_hh") == 1);

  const auto wih = extract_component(model, ComponentKind::DecoderWih);
  CHECK(wih.size() == 3);
  CHECK(wih.count("decoder.gru.W_iz") == 1);

  const auto dec = extract_component(model, ComponentKind::Decoder);
  CHECK(dec.size() == 17);  // embedding + 6 matrices + 3 biases + scorer (3) + combine (2) + projection (2)
  CHECK(dec.count("decoder.embedding") == 1);
  CHECK(dec.count("decoder.attention.W1") == 1);
  CHECK(dec.count("decoder.combine.weight") == 1);
  CHECK(dec.count("decoder.out_proj.bias") == 1);

  const auto enc = extract_component(model, ComponentKind::Encoder);
  CHECK(enc.size() == 10);
  CHECK(enc.count("encoder.embedding") == 1);
  CHECK(enc.count("encoder.gru.b_h") == 1);

  CHECK(extract_component(model, ComponentKind::EncoderEmbedding).size() == 1);
  CHECK(extract_component(model, ComponentKind::DecoderEmbedding).size() == 1);
}

TEST_CASE("identity swap is a no-op for evaluation") {
  const auto data = task::generate_dataset(2);
  const auto model = small_model(2, Mode::AG);
  for (const auto kind : all_component_kinds()) {
    auto copy = model;
    implant_component(copy, extract_component(model, kind), /*freeze=*/true);
    for (auto* p : copy.params())
      CHECK(p->value == const_cast<seq2seq::Seq2SeqModel&>(model).param(p->name).value);
    CHECK(seq2seq::evaluate(copy, data.new_compositions, data.enc_vocab, data.dec_vocab) ==
          seq2seq::evaluate(const_cast<seq2seq::Seq2SeqModel&>(model), data.new_compositions,
                            data.enc_vocab, data.dec_vocab));
  }
}

TEST_CASE("implant validates shapes against the host architecture") {
  auto host = small_model(3, Mode::AG, 8);
  const auto donor = small_model(3, Mode::Baseline, 12);
  CHECK_THROWS_AS(
      implant_component(host, extract_component(donor, ComponentKind::EncoderWhh), true),
      num::ShapeError);
}

TEST_CASE("substitute_and_retrain freezes the donor bit-exactly and trains the rest") {
  const auto data = task::generate_dataset(4);
  const auto host = small_model(4, Mode::AG);
  const auto donor = small_model(5, Mode::Baseline);

  seq2seq::TrainingConfig tc;
  tc.max_epochs = 2;
  tc.seed = 4;
  seq2seq::Seq2SeqModel retrained({});
  const auto result =
      substitute_and_retrain(host, donor, ComponentKind::DecoderWih, data, tc, &retrained);
  CHECK_FALSE(result.diverged);
  CHECK(result.epochs_run == 2);
  CHECK(result.split_accuracy.count("new_compositions") == 1);

  // donor tensors byte-identical to their extracted values
  const auto donor_tensors = extract_component(donor, ComponentKind::DecoderWih);
  for (const auto& [name, value] : donor_tensors) {
    CHECK(retrained.param(name).value == value);
    CHECK(retrained.param(name).frozen);
  }
  // host-side parameters did move (biases stay with the host and train)
  bool moved = false;
  auto& host_mut = const_cast<seq2seq::Seq2SeqModel&>(host);
  for (const char* name : {"decoder.gru.b_z", "decoder.out_proj.weight", "encoder.gru.W_hh"}) {
    if (!(retrained.param(name).value == host_mut.param(name).value)) moved = true;
  }
  CHECK(moved);
}

TEST_CASE("swap rejects architecture mismatches") {
  const auto data = task::generate_dataset(5);
  const auto host = small_model(6, Mode::AG, 8);
  const auto donor = small_model(6, Mode::Baseline, 12);
  seq2seq::TrainingConfig tc;
  tc.max_epochs = 1;
  CHECK_THROWS_AS(substitute_and_retrain(host, donor, ComponentKind::Encoder, data, tc),
                  num::ShapeError);
}

TEST_CASE("prune mask: kept counts use the ceiling and keep_frac=1 keeps everything") {
  std::vector<double> strength(512);
  num::Rng rng(7);
  for (auto& s : strength) s = rng.uniform(0, 1);
  const auto mask = make_prune_mask(strength, strength, 0.05);
  CHECK(mask.kept_encoder() == 26);  // ceil(0.05 * 512)
  CHECK(mask.kept_decoder() == 26);

  const auto all = make_prune_mask(strength, strength, 1.0);
  CHECK(all.kept_encoder() == 512);

  CHECK_THROWS_AS(make_prune_mask(strength, strength, 0.0), std::invalid_argument);
  const auto empty = make_prune_mask(strength, strength, 0.0, /*allow_empty=*/true);
  CHECK(empty.kept_encoder() == 0);
}

TEST_CASE("keep_frac=1 masking is a bit-exact no-op") {
  const auto data = task::generate_dataset(6);
  auto model = small_model(7, Mode::AG);
  auto reference = model;
  const auto result = prune_model(model, data, 1.0);
  CHECK(result.mask.kept_encoder() == model.hidden());
  for (auto* p : model.params()) CHECK(p->value == reference.param(p->name).value);
  CHECK(result.split_accuracy.at("new_compositions") ==
        seq2seq::evaluate(reference, data.new_compositions, data.enc_vocab, data.dec_vocab));
}

TEST_CASE("masked units have every incident weight zeroed") {
  auto model = small_model(8, Mode::AG);
  const auto strength_enc = analysis::neuron_strength(model, analysis::Half::Encoder);
  const auto strength_dec = analysis::neuron_strength(model, analysis::Half::Decoder);
  const auto mask = make_prune_mask(strength_enc, strength_dec, 0.25);
  apply_prune_mask(model, mask);
  CHECK(mask_respected(model, mask));

  const std::size_t H = model.hidden();
  for (std::size_t u = 0; u < H; ++u) {
    if (mask.keep_enc[u]) continue;
    for (std::size_t k = 0; k < H; ++k) {
      CHECK(model.encoder.W_hz.value(u, k) == 0.0);
      CHECK(model.encoder.W_hz.value(k, u) == 0.0);
      CHECK(model.encoder.W_hh.value(u, k) == 0.0);
    }
    CHECK(model.encoder.b_z.value(0, u) == 0.0);
    for (std::size_t i = 0; i < model.attention.W1.value.rows(); ++i)
      CHECK(model.attention.W1.value(i, H + u) == 0.0);
    for (std::size_t i = 0; i < model.combine_w.value.rows(); ++i)
      CHECK(model.combine_w.value(i, H + u) == 0.0);
  }
  for (std::size_t u = 0; u < H; ++u) {
    if (mask.keep_dec[u]) continue;
    for (std::size_t k = 0; k < model.decoder.W_iz.value.cols(); ++k)
      CHECK(model.decoder.W_iz.value(u, k) == 0.0);
    for (std::size_t i = 0; i < model.attention.W1.value.rows(); ++i)
      CHECK(model.attention.W1.value(i, u) == 0.0);
  }
}

TEST_CASE("retraining a pruned model keeps masked weights at exactly zero") {
  const auto data = task::generate_dataset(9);
  auto model = small_model(9, Mode::AG, 12);
  const auto pruned = prune_model(model, data, 0.5);
  seq2seq::TrainingConfig tc;
  tc.max_epochs = 3;
  tc.seed = 9;
  const auto result = retrain_pruned(model, pruned.mask, data, tc);
  CHECK(result.epochs_run == 3);
  CHECK(result.mask_respected);
  CHECK(mask_respected(model, pruned.mask));

  // unmasked weights did train
  bool moved = false;
  auto fresh = small_model(9, Mode::AG, 12);
  apply_prune_mask(fresh, pruned.mask);
  for (auto* p : model.params())
    if (!(p->value == fresh.param(p->name).value)) moved = true;
  CHECK(moved);
}

TEST_CASE("component kind names round trip") {
  for (const auto kind : all_component_kinds())
    CHECK(component_from_string(to_string(kind)) == kind);
  CHECK_THROWS_AS(component_from_string("nonsense"), std::invalid_argument);
}
