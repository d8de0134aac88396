#include "aglab/trace.hpp"

#include <bit>
#include <cstring>

#include <nlohmann/json.hpp>

#include "aglab/io_util.hpp"
#include "aglab/lookup.hpp"

namespace aglab::analysis {

static_assert(std::endian::native == std::endian::little,
              "trace blobs are little-endian raw doubles");

using json = nlohmann::ordered_json;

const char* to_string(Half h) { return h == Half::Encoder ? "encoder" : "decoder"; }
const char* to_string(Gate g) { return g == Gate::Update ? "update" : "reset"; }

std::vector<ActivationTrace> capture_traces(seq2seq::Seq2SeqModel& model,
                                            const std::vector<task::Example>& examples,
                                            const task::Vocab& enc_vocab,
                                            const task::Vocab& dec_vocab) {
  std::vector<ActivationTrace> traces;
  traces.reserve(examples.size());
  const std::size_t H = model.hidden();
  num::Tape tape(/*recording=*/false);
  for (std::size_t idx = 0; idx < examples.size(); ++idx) {
    const auto& ex = examples[idx];
    const auto tok = seq2seq::tokenize(ex, enc_vocab, dec_vocab);
    tape.reset();
    const auto fwd = seq2seq::teacher_forced_loss(tape, model, tok,
                                                  dec_vocab.id(task::kSosToken), 0.0);
    ActivationTrace tr;
    tr.example_index = idx;
    const std::size_t N = tok.enc.size(), T = tok.target.size();
    tr.enc_h = num::Matrix(N, H);
    tr.enc_z = num::Matrix(N, H);
    tr.enc_r = num::Matrix(N, H);
    tr.dec_h = num::Matrix(T, H);
    tr.dec_z = num::Matrix(T, H);
    tr.dec_r = num::Matrix(T, H);
    tr.attn = num::Matrix(T, N);
    for (std::size_t i = 0; i < N; ++i) {
      std::memcpy(tr.enc_h.row(i), tape.value(fwd.enc.h[i]).data(), H * sizeof(double));
      std::memcpy(tr.enc_z.row(i), tape.value(fwd.enc.z[i]).data(), H * sizeof(double));
      std::memcpy(tr.enc_r.row(i), tape.value(fwd.enc.r[i]).data(), H * sizeof(double));
    }
    for (std::size_t t = 0; t < T; ++t) {
      std::memcpy(tr.dec_h.row(t), tape.value(fwd.dec_h[t]).data(), H * sizeof(double));
      std::memcpy(tr.dec_z.row(t), tape.value(fwd.dec_z[t]).data(), H * sizeof(double));
      std::memcpy(tr.dec_r.row(t), tape.value(fwd.dec_r[t]).data(), H * sizeof(double));
      std::memcpy(tr.attn.row(t), tape.value(fwd.attns[t]).data(), N * sizeof(double));
    }
    for (std::size_t i = 0; i < N; ++i) {
      auto table = task::table_token_index(ex.input[i]);
      tr.enc_table.push_back(table ? *table : -1);
    }
    // decoder step t produces the result of applying the table at input
    // position t; step 0 is the copy step, the last step emits <eos>
    for (std::size_t t = 0; t < T; ++t) {
      int label = -1;
      if (t >= 1 && t < N) {
        auto table = task::table_token_index(ex.input[t]);
        if (table) label = *table;
      }
      tr.dec_table.push_back(label);
    }
    traces.push_back(std::move(tr));
  }
  return traces;
}

namespace {

void append_matrix(std::string& blob, json& fields, const char* name, const num::Matrix& m) {
  json f;
  f["name"] = name;
  f["shape"] = {m.rows(), m.cols()};
  f["offset"] = blob.size();
  const std::size_t bytes = m.size() * sizeof(double);
  f["bytes"] = bytes;
  fields.push_back(f);
  const std::size_t at = blob.size();
  blob.resize(at + bytes);
  std::memcpy(blob.data() + at, m.data(), bytes);
}

num::Matrix read_matrix(const std::string& blob, const json& f) {
  const auto shape = f.at("shape").get<std::vector<std::size_t>>();
  num::Matrix m(shape.at(0), shape.at(1));
  const auto offset = f.at("offset").get<std::size_t>();
  const auto bytes = f.at("bytes").get<std::size_t>();
  if (bytes != m.size() * sizeof(double) || offset + bytes > blob.size())
    throw task::ParseError("trace blob: field extent out of range");
  std::memcpy(m.data(), blob.data() + offset, bytes);
  return m;
}

}  // namespace

void write_traces(const std::vector<ActivationTrace>& traces,
                  const std::filesystem::path& stem) {
  std::string blob;
  json items = json::array();
  for (const auto& tr : traces) {
    json item;
    item["example_index"] = tr.example_index;
    item["enc_table"] = tr.enc_table;
    item["dec_table"] = tr.dec_table;
    json fields = json::array();
    append_matrix(blob, fields, "enc_h", tr.enc_h);
    append_matrix(blob, fields, "enc_z", tr.enc_z);
    append_matrix(blob, fields, "enc_r", tr.enc_r);
    append_matrix(blob, fields, "dec_h", tr.dec_h);
    append_matrix(blob, fields, "dec_z", tr.dec_z);
    append_matrix(blob, fields, "dec_r", tr.dec_r);
    append_matrix(blob, fields, "attn", tr.attn);
    item["fields"] = fields;
    items.push_back(item);
  }
  json manifest;
  manifest["format"] = "aglab-traces";
  manifest["version"] = 1;
  manifest["count"] = traces.size();
  manifest["blob_fnv1a"] = hex64(fnv1a64_bytes(blob.data(), blob.size()));
  std::filesystem::path bin = stem;
  bin += ".bin";
  manifest["blob"] = bin.filename().string();
  manifest["traces"] = items;
  write_file_atomic(bin, blob);
  std::filesystem::path man = stem;
  man += ".json";
  write_file_atomic(man, manifest.dump() + "\n");
}

std::vector<ActivationTrace> read_traces(const std::filesystem::path& stem) {
  std::filesystem::path man = stem;
  man += ".json";
  json manifest;
  try {
    manifest = json::parse(read_file(man));
  } catch (const json::parse_error& e) {
    throw task::ParseError(man.string() + ": " + e.what());
  }
  if (manifest.value("format", "") != "aglab-traces")
    throw task::ParseError(man.string() + ": not an aglab trace archive");
  const std::string blob = read_file(man.parent_path() / manifest.at("blob").get<std::string>());
  if (hex64(fnv1a64_bytes(blob.data(), blob.size())) !=
      manifest.at("blob_fnv1a").get<std::string>())
    throw task::ParseError(man.string() + ": blob checksum mismatch");

  std::vector<ActivationTrace> traces;
  for (const auto& item : manifest.at("traces")) {
    ActivationTrace tr;
    tr.example_index = item.at("example_index").get<std::size_t>();
    tr.enc_table = item.at("enc_table").get<std::vector<int>>();
    tr.dec_table = item.at("dec_table").get<std::vector<int>>();
    const auto& fields = item.at("fields");
    tr.enc_h = read_matrix(blob, fields.at(0));
    tr.enc_z = read_matrix(blob, fields.at(1));
    tr.enc_r = read_matrix(blob, fields.at(2));
    tr.dec_h = read_matrix(blob, fields.at(3));
    tr.dec_z = read_matrix(blob, fields.at(4));
    tr.dec_r = read_matrix(blob, fields.at(5));
    tr.attn = read_matrix(blob, fields.at(6));
    traces.push_back(std::move(tr));
  }
  return traces;
}

}  // namespace aglab::analysis
