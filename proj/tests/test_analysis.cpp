#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <set>

#include "aglab/graph.hpp"
#include "aglab/heatmap.hpp"
#include "aglab/io_util.hpp"
#include "aglab/probe.hpp"
#include "aglab/stats.hpp"
#include "aglab/strength.hpp"
#include "aglab/svg.hpp"
#include "aglab/trace.hpp"

using namespace aglab;
using namespace aglab::analysis;

namespace {

seq2seq::Seq2SeqModel small_model(std::uint64_t seed, std::size_t hidden = 8) {
  seq2seq::ModelConfig cfg;
  cfg.enc_vocab = 16;
  cfg.dec_vocab = 11;
  cfg.embed_dim = 4;
  cfg.hidden = hidden;
  cfg.attn_dim = hidden;
  cfg.mode = seq2seq::Mode::AG;
  seq2seq::Seq2SeqModel model(cfg);
  num::Rng rng(seed);
  model.init_params(rng);
  return model;
}

std::vector<ActivationTrace> small_traces(std::uint64_t seed, std::size_t count = 24) {
  const auto data = task::generate_dataset(seed);
  auto model = small_model(seed);
  std::vector<task::Example> examples(data.new_compositions.begin(),
                                      data.new_compositions.begin() + count);
  return capture_traces(model, examples, data.enc_vocab, data.dec_vocab);
}

}  // namespace

TEST_CASE("capture_traces: one trace per example with matching step counts") {
  const auto data = task::generate_dataset(1);
  auto model = small_model(1);
  std::vector<task::Example> examples(data.train.begin(), data.train.begin() + 10);
  examples.push_back(data.train[231]);  // an atomic example (length-2 input)
  const auto traces = capture_traces(model, examples, data.enc_vocab, data.dec_vocab);
  REQUIRE(traces.size() == examples.size());
  for (std::size_t i = 0; i < traces.size(); ++i) {
    CHECK(traces[i].enc_h.rows() == examples[i].input.size());
    CHECK(traces[i].dec_h.rows() == examples[i].target.size());
    CHECK(traces[i].attn.rows() == examples[i].target.size());
    CHECK(traces[i].attn.cols() == examples[i].input.size());
    // gate values stay in the open unit interval
    for (std::size_t t = 0; t < traces[i].dec_z.rows(); ++t)
      for (std::size_t u = 0; u < traces[i].dec_z.cols(); ++u) {
        CHECK(traces[i].dec_z(t, u) > 0.0);
        CHECK(traces[i].dec_z(t, u) < 1.0);
      }
  }
  // step-1 labels are the first applied table
  const auto t0 = task::table_token_index(examples[0].input[1]);
  REQUIRE(t0);
  CHECK(traces[0].enc_table[0] == -1);
  CHECK(traces[0].enc_table[1] == *t0);
  CHECK(traces[0].dec_table[0] == -1);
  CHECK(traces[0].dec_table[1] == *t0);
  CHECK(traces[0].dec_table.back() == -1);  // <eos> step

  const auto again = capture_traces(model, examples, data.enc_vocab, data.dec_vocab);
  CHECK(again.size() == traces.size());
  for (std::size_t i = 0; i < traces.size(); ++i) {
    CHECK(again[i].enc_h == traces[i].enc_h);
    CHECK(again[i].dec_z == traces[i].dec_z);
    CHECK(again[i].attn == traces[i].attn);
  }
}

TEST_CASE("trace archives round trip") {
  const auto traces = small_traces(2, 8);
  const auto dir = std::filesystem::temp_directory_path() / "aglab_test_traces";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  write_traces(traces, dir / "t");
  const auto back = read_traces(dir / "t");
  REQUIRE(back.size() == traces.size());
  for (std::size_t i = 0; i < traces.size(); ++i) {
    CHECK(back[i].enc_h == traces[i].enc_h);
    CHECK(back[i].dec_r == traces[i].dec_r);
    CHECK(back[i].attn == traces[i].attn);
    CHECK(back[i].enc_table == traces[i].enc_table);
    CHECK(back[i].dec_table == traces[i].dec_table);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("heatmap CSV: exact identity export and round trip") {
  num::Matrix eye(3, 3);
  eye(0, 0) = eye(1, 1) = eye(2, 2) = 1.0;
  const auto dir = std::filesystem::temp_directory_path() / "aglab_test_heatmap";
  std::filesystem::remove_all(dir);
  export_heatmap_csv(eye, "identity", dir / "eye.csv");
  CHECK(read_heatmap_csv(dir / "eye.csv") == eye);

  num::Matrix noisy(4, 7);
  num::Rng rng(3);
  for (std::size_t i = 0; i < noisy.rows(); ++i)
    for (std::size_t j = 0; j < noisy.cols(); ++j) noisy(i, j) = rng.uniform(-2, 2);
  export_heatmap_csv(noisy, "noisy", dir / "noisy.csv");
  CHECK(read_heatmap_csv(dir / "noisy.csv") == noisy);  // %.17g round-trips doubles
  std::filesystem::remove_all(dir);
}

TEST_CASE("connectivity graph: zero matrix, complete set, monotone thresholds") {
  num::Matrix zero(5, 5, 0.0);
  CHECK(connectivity_graph(zero, 0.1).edges.empty());

  num::Matrix w(4, 6);
  num::Rng rng(7);
  for (std::size_t i = 0; i < w.rows(); ++i)
    for (std::size_t j = 0; j < w.cols(); ++j) w(i, j) = rng.uniform(-1, 1);
  const auto complete = connectivity_graph(w, 0.0);
  CHECK(complete.edges.size() == 24);
  CHECK(complete.kept_fraction() == doctest::Approx(1.0));

  auto edge_set = [](const ConnectivityGraph& g) {
    std::set<std::pair<std::size_t, std::size_t>> s;
    for (const auto& e : g.edges) s.insert({e.from, e.to});
    return s;
  };
  const auto lo = edge_set(connectivity_graph(w, 0.3));
  const auto hi = edge_set(connectivity_graph(w, 0.6));
  for (const auto& e : hi) CHECK(lo.count(e) == 1);  // tighter threshold is a subset

  CHECK_THROWS_AS(connectivity_graph(w, -0.1), std::invalid_argument);

  const auto dot = to_dot(connectivity_graph(w, 0.5), "w");
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("->") != std::string::npos);
}

TEST_CASE("activation distributions: constant unit has zero IQR, sampling is seeded") {
  auto traces = small_traces(4, 12);
  for (auto& tr : traces)
    for (std::size_t t = 0; t < tr.enc_h.rows(); ++t) tr.enc_h(t, 0) = 0.25;

  num::Rng rng1(5), rng2(5);
  const auto d1 = activation_distributions(traces, Half::Encoder, 8, rng1);
  const auto d2 = activation_distributions(traces, Half::Encoder, 8, rng2);
  REQUIRE(d1.size() == 8);
  for (std::size_t i = 0; i < d1.size(); ++i) {
    CHECK(d1[i].unit == d2[i].unit);
    CHECK(d1[i].median == d2[i].median);
    if (d1[i].unit == 0) {
      CHECK(d1[i].q3 - d1[i].q1 == doctest::Approx(0.0));
      CHECK(d1[i].range() == doctest::Approx(0.0));
    }
    CHECK(d1[i].min <= d1[i].q1);
    CHECK(d1[i].q1 <= d1[i].median);
    CHECK(d1[i].median <= d1[i].q3);
    CHECK(d1[i].q3 <= d1[i].max);
  }
}

TEST_CASE("gate saturation: constants, bounds, and concatenation invariance") {
  auto traces = small_traces(6, 10);
  for (auto& tr : traces)
    for (std::size_t t = 0; t < tr.dec_z.rows(); ++t) {
      tr.dec_z(t, 0) = 0.5;   // never saturated
      tr.dec_z(t, 1) = 0.95;  // always right-saturated
      tr.dec_z(t, 2) = 0.05;  // always left-saturated
    }
  const auto sat = gate_saturation(traces, Half::Decoder, Gate::Update);
  CHECK(sat.left[0] == 0.0);
  CHECK(sat.right[0] == 0.0);
  CHECK(sat.left[1] == 0.0);
  CHECK(sat.right[1] == 1.0);
  CHECK(sat.left[2] == 1.0);
  CHECK(sat.right[2] == 0.0);
  for (std::size_t u = 0; u < sat.left.size(); ++u) CHECK(sat.left[u] + sat.right[u] <= 1.0);

  auto doubled = traces;
  doubled.insert(doubled.end(), traces.begin(), traces.end());
  const auto sat2 = gate_saturation(doubled, Half::Decoder, Gate::Update);
  CHECK(sat2.left == sat.left);
  CHECK(sat2.right == sat.right);

  CHECK(sat.right_saturated_unit_fraction(0.5) > 0.0);
}

namespace {

// toy probe data: class = argmax over the first n_classes feature slots,
// plus pure-noise features after them
ProbeDataset toy_dataset(std::size_t rows, std::size_t units, std::size_t n_classes,
                         std::uint64_t seed, bool shuffle_labels = false) {
  ProbeDataset data;
  data.x = num::Matrix(rows, units);
  data.n_classes = n_classes;
  num::Rng rng(seed);
  for (std::size_t r = 0; r < rows; ++r) {
    const int label = static_cast<int>(rng.index(n_classes));
    for (std::size_t u = 0; u < units; ++u) data.x(r, u) = rng.uniform(0, 0.3);
    data.x(r, label) = 1.0;
    data.labels.push_back(label);
  }
  if (shuffle_labels) rng.shuffle(data.labels);
  std::vector<std::size_t> order(rows);
  for (std::size_t i = 0; i < rows; ++i) order[i] = i;
  rng.shuffle(order);
  const std::size_t n_eval = rows / 4;
  data.eval_rows.assign(order.begin(), order.begin() + n_eval);
  data.train_rows.assign(order.begin() + n_eval, order.end());
  return data;
}

}  // namespace

TEST_CASE("probe training: separable toy data reaches accuracy 1") {
  const auto data = toy_dataset(320, 12, 4, 11);
  std::vector<std::size_t> units(12);
  for (std::size_t i = 0; i < 12; ++i) units[i] = i;
  ProbeConfig cfg;
  const auto probe = train_probe(data, units, cfg);
  CHECK(probe_accuracy(probe, data, units, data.eval_rows) == doctest::Approx(1.0));
  CHECK(probe.iters > 0);
}

TEST_CASE("probe training: shuffled labels stay near chance on held-out rows") {
  const auto data = toy_dataset(800, 24, 8, 13, /*shuffle_labels=*/true);
  std::vector<std::size_t> units(24);
  for (std::size_t i = 0; i < 24; ++i) units[i] = i;
  ProbeConfig cfg;
  const auto probe = train_probe(data, units, cfg);
  const double acc = probe_accuracy(probe, data, units, data.eval_rows);
  CHECK(acc >= 0.125 - 0.05);
  CHECK(acc <= 0.125 + 0.05);
}

TEST_CASE("probe training is deterministic") {
  const auto data = toy_dataset(200, 10, 4, 17);
  std::vector<std::size_t> units(10);
  for (std::size_t i = 0; i < 10; ++i) units[i] = i;
  ProbeConfig cfg;
  const auto p1 = train_probe(data, units, cfg);
  const auto p2 = train_probe(data, units, cfg);
  CHECK(p1.w == p2.w);
  CHECK(p1.b == p2.b);
  CHECK(p1.iters == p2.iters);
}

TEST_CASE("functional group: one dominant unit gives a singleton group") {
  const auto data = toy_dataset(400, 16, 2, 19);
  // make class fully determined by unit 0's sign pattern
  ProbeDataset strong = data;
  for (std::size_t r = 0; r < strong.x.rows(); ++r) {
    strong.x(r, 0) = strong.labels[r] == 0 ? -1.0 : 1.0;
    for (std::size_t u = 1; u < strong.x.cols(); ++u) strong.x(r, u) = 0.0;
  }
  ProbeConfig cfg;
  std::vector<std::size_t> units(16);
  for (std::size_t i = 0; i < 16; ++i) units[i] = i;
  const auto full = train_probe(strong, units, cfg);
  const double full_acc = probe_accuracy(full, strong, units, strong.eval_rows);
  const auto report = functional_group(strong, full, full_acc, cfg);
  CHECK(report.group.size() == 1);
  CHECK(report.group[0] == 0);
  CHECK(report.group_accuracy >= 0.95 * full_acc);
  // the invariant "group is a prefix of the ranking" holds by construction
  const auto ranking = rank_units(full);
  CHECK(report.group[0] == ranking[0]);
}

TEST_CASE("functional group accuracy curve is near-monotonic") {
  const auto traces = small_traces(8, 24);
  ProbeConfig cfg;
  cfg.seed = 5;
  const auto data = make_probe_dataset(traces, ProbeKind::TableEncoderHidden, cfg);
  std::vector<std::size_t> units(data.x.cols());
  for (std::size_t i = 0; i < units.size(); ++i) units[i] = i;
  const auto full = train_probe(data, units, cfg);
  const double full_acc = probe_accuracy(full, data, units, data.eval_rows);
  const auto report = functional_group(data, full, full_acc, cfg);
  REQUIRE(!report.curve.empty());
  std::size_t non_monotone = 0;
  for (std::size_t i = 1; i < report.curve.size(); ++i)
    if (report.curve[i].second < report.curve[i - 1].second - 1e-12) ++non_monotone;
  CHECK(non_monotone * 10 <= report.curve.size() * 9);  // tolerate small retraining noise
}

TEST_CASE("probe dataset labels: balanced tables and timesteps over all compositions") {
  const auto data = task::generate_dataset(21);
  auto model = small_model(21);
  const auto examples = data.all_compositions();
  CHECK(examples.size() == 512);
  const auto traces = capture_traces(model, examples, data.enc_vocab, data.dec_vocab);
  ProbeConfig cfg;

  const auto table_ds = make_probe_dataset(traces, ProbeKind::TableEncoderHidden, cfg);
  CHECK(table_ds.x.rows() == 1024);
  CHECK(table_ds.n_classes == 8);
  std::vector<std::size_t> counts(8, 0);
  for (int l : table_ds.labels) ++counts[l];
  for (const auto c : counts) CHECK(c == 128);

  const auto ts_ds = make_probe_dataset(traces, ProbeKind::TimestepEncoderHidden, cfg);
  CHECK(ts_ds.x.rows() == 1536);
  CHECK(ts_ds.n_classes == 3);

  const auto gate_ds = make_probe_dataset(traces, ProbeKind::TableDecoderUpdateGate, cfg);
  CHECK(gate_ds.x.rows() == 1024);
}

TEST_CASE("top-weight overlap endpoints") {
  std::vector<double> strength{9, 8, 7, 6, 5, 4, 3, 2, 1, 0};
  CHECK(top_weight_overlap({0, 1}, strength, 0.2) == doctest::Approx(1.0));
  CHECK(top_weight_overlap({8, 9}, strength, 0.2) == doctest::Approx(0.0));
  CHECK(top_weight_overlap({0, 9}, strength, 0.2) == doctest::Approx(0.5));
  CHECK(top_fraction(strength, 0.2) == std::vector<std::size_t>{0, 1});
}

TEST_CASE("neuron strength: uniform weights give a uniform score") {
  auto model = small_model(31, 4);
  for (auto* p : model.params()) p->value.fill(0.5);
  const auto enc = neuron_strength(model, Half::Encoder);
  const auto dec = neuron_strength(model, Half::Decoder);
  REQUIRE(enc.size() == 4);
  REQUIRE(dec.size() == 4);
  for (double v : enc) CHECK(v == doctest::Approx(0.5));
  for (double v : dec) CHECK(v == doctest::Approx(0.5));

  // strengthening one unit's incident weights moves only its score
  auto model2 = small_model(31, 4);
  for (auto* p : model2.params()) p->value.fill(0.1);
  for (std::size_t k = 0; k < model2.encoder.W_hz.value.cols(); ++k)
    model2.encoder.W_hz.value(2, k) = 5.0;
  const auto enc2 = neuron_strength(model2, Half::Encoder);
  CHECK(enc2[2] > enc2[0]);
  CHECK(enc2[0] == doctest::Approx(enc2[1]));
}

TEST_CASE("svg writers emit valid-looking documents") {
  num::Matrix m(3, 4);
  m(1, 2) = 1.0;
  m(2, 0) = -0.5;
  const auto svg = heatmap_svg(m, "test");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("rect") != std::string::npos);

  ScatterSeries s;
  s.label = "units";
  s.color = "#112233";
  s.points = {{0.1, 0.9}, {0.5, 0.5}};
  const auto sc = scatter_svg({s}, "sat", "left", "right");
  CHECK(sc.find("circle") != std::string::npos);
}
