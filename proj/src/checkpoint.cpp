#include "aglab/checkpoint.hpp"

#include <bit>
#include <cstring>

#include <nlohmann/json.hpp>

#include "aglab/io_util.hpp"

namespace aglab::seq2seq {

static_assert(std::endian::native == std::endian::little,
              "checkpoint blobs are little-endian raw doubles");

using json = nlohmann::ordered_json;

void save_checkpoint(const Seq2SeqModel& model, const std::filesystem::path& stem) {
  const auto params = model.params();

  std::string blob;
  json tensors = json::array();
  for (const auto* p : params) {
    const std::size_t bytes = p->value.size() * sizeof(double);
    json t;
    t["name"] = p->name;
    t["shape"] = {p->value.rows(), p->value.cols()};
    t["dtype"] = "f64";
    t["offset"] = blob.size();
    t["bytes"] = bytes;
    tensors.push_back(t);
    const std::size_t at = blob.size();
    blob.resize(at + bytes);
    std::memcpy(blob.data() + at, p->value.data(), bytes);
  }

  std::filesystem::path bin = stem;
  bin += ".bin";
  std::filesystem::path man = stem;
  man += ".json";

  json manifest;
  manifest["format"] = "aglab-checkpoint";
  manifest["version"] = 1;
  manifest["mode"] = to_string(model.mode());
  const auto& c = model.config();
  manifest["config"] = {{"enc_vocab", c.enc_vocab}, {"dec_vocab", c.dec_vocab},
                        {"embed_dim", c.embed_dim}, {"hidden", c.hidden},
                        {"attn_dim", c.attn_dim},   {"mode", to_string(c.mode)}};
  manifest["blob"] = bin.filename().string();
  manifest["blob_fnv1a"] = hex64(fnv1a64_bytes(blob.data(), blob.size()));
  manifest["tensors"] = tensors;

  write_file_atomic(bin, blob);
  write_file_atomic(man, manifest.dump(2) + "\n");
}

Seq2SeqModel load_checkpoint(const std::filesystem::path& stem) {
  std::filesystem::path man = stem;
  man += ".json";
  json manifest;
  try {
    manifest = json::parse(read_file(man));
  } catch (const json::parse_error& e) {
    throw task::ParseError(man.string() + ": " + e.what());
  }
  if (manifest.value("format", "") != "aglab-checkpoint")
    throw task::ParseError(man.string() + ": not an aglab checkpoint manifest");

  const auto& jc = manifest.at("config");
  ModelConfig cfg;
  cfg.enc_vocab = jc.at("enc_vocab").get<std::size_t>();
  cfg.dec_vocab = jc.at("dec_vocab").get<std::size_t>();
  cfg.embed_dim = jc.at("embed_dim").get<std::size_t>();
  cfg.hidden = jc.at("hidden").get<std::size_t>();
  cfg.attn_dim = jc.at("attn_dim").get<std::size_t>();
  cfg.mode = mode_from_string(manifest.at("mode").get<std::string>());

  const auto blob_path = man.parent_path() / manifest.at("blob").get<std::string>();
  const std::string blob = read_file(blob_path);
  const auto want_hash = manifest.at("blob_fnv1a").get<std::string>();
  if (hex64(fnv1a64_bytes(blob.data(), blob.size())) != want_hash)
    throw task::ParseError(blob_path.string() + ": blob checksum mismatch");

  Seq2SeqModel model(cfg);
  for (const auto& t : manifest.at("tensors")) {
    auto& p = model.param(t.at("name").get<std::string>());
    const auto shape = t.at("shape").get<std::vector<std::size_t>>();
    if (shape.size() != 2 || shape[0] != p.value.rows() || shape[1] != p.value.cols())
      throw task::ParseError(man.string() + ": tensor '" + p.name + "' shape mismatch");
    const auto offset = t.at("offset").get<std::size_t>();
    const auto bytes = t.at("bytes").get<std::size_t>();
    if (bytes != p.value.size() * sizeof(double) || offset + bytes > blob.size())
      throw task::ParseError(man.string() + ": tensor '" + p.name + "' extent out of range");
    std::memcpy(p.value.data(), blob.data() + offset, bytes);
    if (!p.value.all_finite())
      throw task::ParseError(man.string() + ": tensor '" + p.name + "' has non-finite values");
  }
  return model;
}

}  // namespace aglab::seq2seq
