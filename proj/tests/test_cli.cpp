#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "aglab/checkpoint.hpp"
#include "aglab/io_util.hpp"
#include "aglab/train.hpp"

namespace fs = std::filesystem;
using namespace aglab;

namespace {

std::string cli_bin() {
  const char* env = std::getenv("AGLAB_CLI_BIN");
  REQUIRE_MESSAGE(env != nullptr, "AGLAB_CLI_BIN must point at the aglab binary");
  return env;
}

int run(const std::string& args) {
  const std::string cmd = cli_bin() + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

bool same_bytes(const fs::path& a, const fs::path& b) { return read_file(a) == read_file(b); }

}  // namespace

TEST_CASE("gen-data is deterministic across invocations") {
  const auto dir = fresh_dir("aglab_cli_gendata");
  CHECK(run("gen-data --seed 1 --out " + (dir / "a").string()) == 0);
  CHECK(run("gen-data --seed 1 --out " + (dir / "b").string()) == 0);
  CHECK(run("gen-data --seed 2 --out " + (dir / "c").string()) == 0);
  for (const char* f : {"header.json", "train.tsv", "heldout_inputs.tsv",
                        "heldout_compositions.tsv", "heldout_tables.tsv",
                        "new_compositions.tsv"}) {
    CHECK(same_bytes(dir / "a" / f, dir / "b" / f));
  }
  CHECK_FALSE(same_bytes(dir / "a" / "train.tsv", dir / "c" / "train.tsv"));
  fs::remove_all(dir);
}

TEST_CASE("eval on an untrained checkpoint is near zero everywhere") {
  const auto dir = fresh_dir("aglab_cli_eval");
  REQUIRE(run("gen-data --seed 3 --out " + (dir / "data").string()) == 0);

  // untrained small model written through the library
  const auto data = task::read_dataset(dir / "data");
  seq2seq::ModelConfig mc;
  mc.enc_vocab = data.enc_vocab.size();
  mc.dec_vocab = data.dec_vocab.size();
  mc.embed_dim = 4;
  mc.hidden = 8;
  mc.attn_dim = 8;
  seq2seq::Seq2SeqModel model(mc);
  num::Rng rng(3);
  model.init_params(rng);
  seq2seq::save_checkpoint(model, dir / "fresh");

  CHECK(run("eval --checkpoint " + (dir / "fresh").string() + " --data " +
            (dir / "data").string() + " --out " + (dir / "eval.json").string()) == 0);
  const auto j = nlohmann::json::parse(read_file(dir / "eval.json"));
  for (const auto& [split, acc] : j.items()) CHECK(acc.get<double>() <= 0.05);
  fs::remove_all(dir);
}

TEST_CASE("train, trace and analyze round trip through the command line") {
  const auto dir = fresh_dir("aglab_cli_train");
  REQUIRE(run("gen-data --seed 4 --out " + (dir / "data").string()) == 0);
  REQUIRE(run("train --data " + (dir / "data").string() +
              " --mode ag --seed 4 --epochs 2 --hidden 12 --embed-dim 4 --out " +
              (dir / "m").string()) == 0);
  CHECK(fs::exists(dir / "m.json"));
  CHECK(fs::exists(dir / "m.bin"));
  CHECK(fs::exists(dir / "m.history.csv"));

  CHECK(run("trace --checkpoint " + (dir / "m").string() + " --data " + (dir / "data").string() +
            " --split new_compositions --out " + (dir / "traces").string()) == 0);
  CHECK(fs::exists(dir / "traces.json"));

  CHECK(run("analyze --what heatmap --checkpoint " + (dir / "m").string() +
            " --matrix decoder.embedding --out " + (dir / "analysis").string()) == 0);
  CHECK(fs::exists(dir / "analysis" / "heatmap_decoder_embedding.csv"));
  CHECK(fs::exists(dir / "analysis" / "heatmap_decoder_embedding.svg"));

  CHECK(run("analyze --what graph --checkpoint " + (dir / "m").string() +
            " --matrix encoder.gru.W_hz --threshold 0.05 --out " +
            (dir / "analysis").string()) == 0);
  CHECK(fs::exists(dir / "analysis" / "graph_encoder_gru_W_hz.dot"));

  CHECK(run("analyze --what saturation --traces " + (dir / "traces").string() + " --out " +
            (dir / "analysis").string()) == 0);
  CHECK(fs::exists(dir / "analysis" / "saturation.csv"));
  fs::remove_all(dir);
}

TEST_CASE("validation failures exit with code 1") {
  CHECK(run("eval --checkpoint /nonexistent/ckpt --data /nonexistent/data") == 1);
  CHECK(run("not-a-command") == 1);
  CHECK(run("analyze --what nonsense --out /tmp/aglab_cli_x") == 1);
  CHECK(run("gen-data --bogus-flag 1") == 1);
}
