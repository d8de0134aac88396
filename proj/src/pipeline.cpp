#include "aglab/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>

#include "aglab/checkpoint.hpp"
#include "aglab/graph.hpp"
#include "aglab/heatmap.hpp"
#include "aglab/io_util.hpp"
#include "aglab/prune.hpp"
#include "aglab/stats.hpp"
#include "aglab/strength.hpp"
#include "aglab/svg.hpp"
#include "aglab/swap.hpp"
#include "aglab/trace.hpp"

namespace aglab {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;
using seq2seq::Mode;

std::vector<SwapCellConfig> default_swap_cells() {
  std::vector<SwapCellConfig> cells;
  for (const auto kind : ablate::all_component_kinds()) cells.push_back({Mode::AG, kind});
  cells.push_back({Mode::Baseline, ablate::ComponentKind::Encoder});
  cells.push_back({Mode::Baseline, ablate::ComponentKind::Decoder});
  return cells;
}

json experiment_config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["version"] = cfg.version;
  j["data_seed"] = cfg.data_seed;
  j["seeds"] = cfg.seeds;
  j["run_baseline"] = cfg.run_baseline;
  j["run_ag"] = cfg.run_ag;
  j["model"] = {{"hidden", cfg.hidden}, {"embed_dim", cfg.embed_dim},
                {"attn_dim", cfg.attn_dim}};
  j["train"] = {{"max_epochs", cfg.train.max_epochs}, {"lr", cfg.train.lr},
                {"batch_size", cfg.train.batch_size}, {"lambda_ag", cfg.train.lambda_ag},
                {"val_fraction", cfg.train.val_fraction}, {"patience", cfg.train.patience}};
  std::vector<std::string> cells;
  for (const auto& c : cfg.swap_cells)
    cells.push_back(std::string(to_string(c.host)) + ":" + to_string(c.component));
  j["swap_cells"] = cells;
  j["swap_pairs"] = cfg.swap_pairs;
  j["swap_epochs"] = cfg.swap_epochs;
  j["prune_keep_frac"] = cfg.prune_keep_frac;
  j["prune_retrain_epochs"] = cfg.prune_retrain_epochs;
  j["probe_seed"] = cfg.probe_seed;
  j["dist_sample"] = cfg.dist_sample;
  j["enc_threshold"] = cfg.enc_threshold;
  j["dec_threshold"] = cfg.dec_threshold;
  j["threads"] = cfg.threads;
  j["reuse_artifacts"] = cfg.reuse_artifacts;
  j["out_dir"] = cfg.out_dir;
  return j;
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  cfg.version = j.value("version", 1);
  if (cfg.version != 1)
    throw std::invalid_argument("unsupported config version " + std::to_string(cfg.version));
  cfg.data_seed = j.value("data_seed", cfg.data_seed);
  if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  cfg.run_baseline = j.value("run_baseline", cfg.run_baseline);
  cfg.run_ag = j.value("run_ag", cfg.run_ag);
  if (j.contains("model")) {
    const auto& m = j.at("model");
    cfg.hidden = m.value("hidden", cfg.hidden);
    cfg.embed_dim = m.value("embed_dim", cfg.embed_dim);
    cfg.attn_dim = m.value("attn_dim", cfg.attn_dim);
  }
  if (j.contains("train")) {
    const auto& t = j.at("train");
    cfg.train.max_epochs = t.value("max_epochs", cfg.train.max_epochs);
    cfg.train.lr = t.value("lr", cfg.train.lr);
    cfg.train.batch_size = t.value("batch_size", cfg.train.batch_size);
    cfg.train.lambda_ag = t.value("lambda_ag", cfg.train.lambda_ag);
    cfg.train.val_fraction = t.value("val_fraction", cfg.train.val_fraction);
    cfg.train.patience = t.value("patience", cfg.train.patience);
  }
  if (j.contains("swap_cells")) {
    cfg.swap_cells.clear();
    for (const auto& s : j.at("swap_cells")) {
      const std::string cell = s.get<std::string>();
      const auto colon = cell.find(':');
      if (colon == std::string::npos)
        throw std::invalid_argument("swap cell '" + cell + "' must be '<mode>:<component>'");
      cfg.swap_cells.push_back({seq2seq::mode_from_string(cell.substr(0, colon)),
                                ablate::component_from_string(cell.substr(colon + 1))});
    }
  }
  cfg.swap_pairs = j.value("swap_pairs", cfg.swap_pairs);
  cfg.swap_epochs = j.value("swap_epochs", cfg.swap_epochs);
  cfg.prune_keep_frac = j.value("prune_keep_frac", cfg.prune_keep_frac);
  cfg.prune_retrain_epochs = j.value("prune_retrain_epochs", cfg.prune_retrain_epochs);
  cfg.probe_seed = j.value("probe_seed", cfg.probe_seed);
  cfg.dist_sample = j.value("dist_sample", cfg.dist_sample);
  cfg.enc_threshold = j.value("enc_threshold", cfg.enc_threshold);
  cfg.dec_threshold = j.value("dec_threshold", cfg.dec_threshold);
  cfg.threads = j.value("threads", cfg.threads);
  cfg.reuse_artifacts = j.value("reuse_artifacts", cfg.reuse_artifacts);
  cfg.out_dir = j.value("out_dir", cfg.out_dir);
  return cfg;
}

std::string experiment_config_hash(const ExperimentConfig& cfg) {
  json j = experiment_config_to_json(cfg);
  j.erase("out_dir");
  j.erase("threads");
  j.erase("reuse_artifacts");
  const std::string s = j.dump();
  return hex64(fnv1a64_bytes(s.data(), s.size()));
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<const RunMetrics*> ReproSummary::mode_runs(Mode mode) const {
  std::vector<const RunMetrics*> out;
  for (const auto& r : runs)
    if (r.mode == mode) out.push_back(&r);
  return out;
}

const SwapCellResult* ReproSummary::cell(Mode host, ablate::ComponentKind kind) const {
  for (const auto& c : swaps)
    if (c.cell.host == host && c.cell.component == kind) return &c;
  return nullptr;
}

namespace {

const char* kTestSplits[4] = {"heldout_compositions", "heldout_inputs", "heldout_tables",
                              "new_compositions"};

std::string hash_of(const json& j) {
  const std::string s = j.dump();
  return hex64(fnv1a64_bytes(s.data(), s.size()));
}

// Bumped whenever the model or artifact schema changes, so stale caches
// from older binaries are never reused.
constexpr int kArtifactSchema = 2;

// Artifacts are keyed per pipeline stage so that, say, changing a probe
// setting does not invalidate cached checkpoints.
json train_stage_json(const ExperimentConfig& cfg) {
  json j;
  j["schema"] = kArtifactSchema;
  j["data_seed"] = cfg.data_seed;
  j["model"] = {{"hidden", cfg.hidden}, {"embed_dim", cfg.embed_dim},
                {"attn_dim", cfg.attn_dim}};
  j["train"] = {{"max_epochs", cfg.train.max_epochs}, {"lr", cfg.train.lr},
                {"batch_size", cfg.train.batch_size}, {"lambda_ag", cfg.train.lambda_ag},
                {"val_fraction", cfg.train.val_fraction}, {"patience", cfg.train.patience}};
  return j;
}

std::string stage_train_hash(const ExperimentConfig& cfg) {
  return hash_of(train_stage_json(cfg));
}

std::string stage_analysis_hash(const ExperimentConfig& cfg) {
  json j = train_stage_json(cfg);
  j["probe_seed"] = cfg.probe_seed;
  j["dist_sample"] = cfg.dist_sample;
  j["enc_threshold"] = cfg.enc_threshold;
  j["dec_threshold"] = cfg.dec_threshold;
  return hash_of(j);
}

std::string stage_swap_hash(const ExperimentConfig& cfg) {
  json j = train_stage_json(cfg);
  j["swap_epochs"] = cfg.swap_epochs;
  return hash_of(j);
}

std::string stage_prune_hash(const ExperimentConfig& cfg) {
  json j = train_stage_json(cfg);
  j["prune_keep_frac"] = cfg.prune_keep_frac;
  j["prune_retrain_epochs"] = cfg.prune_retrain_epochs;
  return hash_of(j);
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

std::string fmt(double v, int prec = 3) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

std::string join_values(const std::vector<double>& v, int prec = 3) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += fmt(v[i], prec);
  }
  return out + "]";
}

class Logger {
 public:
  explicit Logger(std::ostream& os) : os_(os) {}
  void line(const std::string& s) {
    std::lock_guard<std::mutex> lock(mu_);
    os_ << s << "\n" << std::flush;
  }

 private:
  std::ostream& os_;
  std::mutex mu_;
};

void run_jobs(std::vector<std::function<void()>>& jobs, std::size_t threads) {
  if (jobs.empty()) return;
  threads = std::max<std::size_t>(1, std::min(threads, jobs.size()));
  std::atomic<std::size_t> next{0};
  std::vector<std::string> errors(jobs.size());
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        jobs[i]();
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (!e.empty()) throw std::runtime_error("pipeline job failed: " + e);
}

std::string run_name(Mode mode, std::uint64_t seed) {
  return std::string(to_string(mode)) + "_seed" + std::to_string(seed);
}

json load_json_if(const fs::path& path) {
  if (!fs::exists(path)) return {};
  try {
    return json::parse(read_file(path));
  } catch (...) {
    return {};
  }
}

std::map<std::string, double> eval_splits(seq2seq::Seq2SeqModel& model,
                                          const task::DatasetBundle& data) {
  std::map<std::string, double> out;
  for (const auto* split : kTestSplits)
    out[split] = seq2seq::evaluate(model, data.split(split), data.enc_vocab, data.dec_vocab);
  return out;
}

json probe_report_to_json(const analysis::ProbeReport& r) {
  json j;
  j["kind"] = r.kind;
  j["full_accuracy"] = r.full_accuracy;
  j["group"] = r.group;
  j["group_accuracy"] = r.group_accuracy;
  j["overlap"] = r.overlap;
  json curve = json::array();
  for (const auto& [size, acc] : r.curve) curve.push_back({{"units", size}, {"accuracy", acc}});
  j["curve"] = curve;
  return j;
}

analysis::ProbeReport probe_report_from_json(const json& j) {
  analysis::ProbeReport r;
  r.kind = j.at("kind").get<std::string>();
  r.full_accuracy = j.at("full_accuracy").get<double>();
  r.group = j.at("group").get<std::vector<std::size_t>>();
  r.group_accuracy = j.at("group_accuracy").get<double>();
  r.overlap = j.at("overlap").get<double>();
  for (const auto& p : j.at("curve"))
    r.curve.emplace_back(p.at("units").get<std::size_t>(), p.at("accuracy").get<double>());
  return r;
}

json run_metrics_to_json(const RunMetrics& m) {
  json j;
  j["mode"] = to_string(m.mode);
  j["seed"] = m.seed;
  j["diverged"] = m.diverged;
  j["best_epoch"] = m.best_epoch;
  j["split_acc"] = m.split_acc;
  json probes = json::object();
  for (const auto& [kind, report] : m.probes) probes[kind] = probe_report_to_json(report);
  j["probes"] = probes;
  j["right_sat_unit_frac"] = m.right_sat_unit_frac;
  j["enc_edge_fraction"] = m.enc_edge_fraction;
  j["dec_edge_fraction"] = m.dec_edge_fraction;
  j["dec_emb_row_mean_abs"] = m.dec_emb_row_mean_abs;
  j["enc_dist_ranges"] = m.enc_dist_ranges;
  return j;
}

RunMetrics run_metrics_from_json(const json& j) {
  RunMetrics m;
  m.mode = seq2seq::mode_from_string(j.at("mode").get<std::string>());
  m.seed = j.at("seed").get<std::uint64_t>();
  m.diverged = j.at("diverged").get<bool>();
  m.best_epoch = j.at("best_epoch").get<std::size_t>();
  m.split_acc = j.at("split_acc").get<std::map<std::string, double>>();
  for (const auto& [kind, report] : j.at("probes").items())
    m.probes[kind] = probe_report_from_json(report);
  m.right_sat_unit_frac = j.at("right_sat_unit_frac").get<double>();
  m.enc_edge_fraction = j.at("enc_edge_fraction").get<double>();
  m.dec_edge_fraction = j.at("dec_edge_fraction").get<double>();
  m.dec_emb_row_mean_abs = j.at("dec_emb_row_mean_abs").get<std::vector<double>>();
  m.enc_dist_ranges = j.at("enc_dist_ranges").get<std::vector<double>>();
  return m;
}

// Probes, saturation, distributions, heatmaps and connectivity exports
// for one trained model; artifact files land under <out>/analysis.
void analyze_run(const ExperimentConfig& cfg, const task::DatasetBundle& data,
                 seq2seq::Seq2SeqModel& model, RunMetrics& metrics, const fs::path& dir) {
  const std::string name = run_name(metrics.mode, metrics.seed);
  fs::create_directories(dir);

  // balanced probe corpus: every composition example, captured teacher-forced
  const auto probe_examples = data.all_compositions();
  const auto probe_traces =
      analysis::capture_traces(model, probe_examples, data.enc_vocab, data.dec_vocab);

  analysis::ProbeConfig pcfg;
  pcfg.seed = cfg.probe_seed;
  const auto strength_enc = analysis::neuron_strength(model, analysis::Half::Encoder);
  const auto strength_dec = analysis::neuron_strength(model, analysis::Half::Decoder);

  const std::vector<analysis::ProbeKind> kinds{
      analysis::ProbeKind::TableEncoderHidden, analysis::ProbeKind::TableDecoderUpdateGate,
      analysis::ProbeKind::TableDecoderResetGate, analysis::ProbeKind::TimestepEncoderHidden};
  for (const auto kind : kinds) {
    const auto dataset = analysis::make_probe_dataset(probe_traces, kind, pcfg);
    std::vector<std::size_t> all_units(dataset.x.cols());
    std::iota(all_units.begin(), all_units.end(), 0);
    const auto full = analysis::train_probe(dataset, all_units, pcfg);
    const double full_acc = analysis::probe_accuracy(full, dataset, all_units, dataset.eval_rows);
    auto report = analysis::functional_group(dataset, full, full_acc, pcfg);
    report.kind = to_string(kind);
    const bool decoder_side = kind == analysis::ProbeKind::TableDecoderUpdateGate ||
                              kind == analysis::ProbeKind::TableDecoderResetGate;
    report.overlap = analysis::top_weight_overlap(
        report.group, decoder_side ? strength_dec : strength_enc, 0.05);
    metrics.probes[report.kind] = report;
  }

  // test-set traces for the saturation and range analyses
  std::vector<task::Example> test_examples;
  for (const auto* split : kTestSplits) {
    const auto& s = data.split(split);
    test_examples.insert(test_examples.end(), s.begin(), s.end());
  }
  const auto test_traces =
      analysis::capture_traces(model, test_examples, data.enc_vocab, data.dec_vocab);

  {
    std::string csv = "half,gate,unit,left,right\n";
    std::vector<analysis::ScatterSeries> series;
    for (const auto half : {analysis::Half::Encoder, analysis::Half::Decoder}) {
      for (const auto gate : {analysis::Gate::Update, analysis::Gate::Reset}) {
        const auto sat = analysis::gate_saturation(test_traces, half, gate);
        if (half == analysis::Half::Decoder && gate == analysis::Gate::Update)
          metrics.right_sat_unit_frac = sat.right_saturated_unit_fraction(0.5);
        analysis::ScatterSeries s;
        s.label = std::string(to_string(half)) + " " + to_string(gate);
        s.color = gate == analysis::Gate::Update ? "#1f77b4" : "#d62728";
        for (std::size_t u = 0; u < sat.left.size(); ++u) {
          csv += std::string(to_string(half)) + "," + to_string(gate) + "," + std::to_string(u) +
                 "," + fmt(sat.left[u], 6) + "," + fmt(sat.right[u], 6) + "\n";
          s.points.emplace_back(sat.left[u], sat.right[u]);
        }
        series.push_back(std::move(s));
      }
    }
    write_file_atomic(dir / ("saturation_" + name + ".csv"), csv);
    write_file_atomic(dir / ("saturation_" + name + ".svg"),
                      analysis::scatter_svg(series, "gate saturation " + name, "left-saturated",
                                            "right-saturated"));
  }

  {
    num::Rng rng(cfg.probe_seed);
    std::string csv = "half,unit,min,q1,median,q3,max\n";
    for (const auto half : {analysis::Half::Encoder, analysis::Half::Decoder}) {
      num::Rng sub = rng.child(to_string(half));
      const auto dists =
          analysis::activation_distributions(test_traces, half, cfg.dist_sample, sub);
      for (const auto& d : dists) {
        csv += std::string(to_string(half)) + "," + std::to_string(d.unit) + "," +
               fmt(d.min, 6) + "," + fmt(d.q1, 6) + "," + fmt(d.median, 6) + "," +
               fmt(d.q3, 6) + "," + fmt(d.max, 6) + "\n";
        if (half == analysis::Half::Encoder) metrics.enc_dist_ranges.push_back(d.range());
      }
    }
    write_file_atomic(dir / ("dists_" + name + ".csv"), csv);
  }

  {
    const auto& emb = model.dec_embedding.value;
    analysis::export_heatmap_csv(emb, "decoder.embedding " + name,
                                 dir / ("heatmap_decoder_embedding_" + name + ".csv"));
    write_file_atomic(dir / ("heatmap_decoder_embedding_" + name + ".svg"),
                      analysis::heatmap_svg(emb, "decoder.embedding " + name));
    for (std::size_t r = 0; r < emb.rows(); ++r) {
      double acc = 0.0;
      for (std::size_t c = 0; c < emb.cols(); ++c) acc += std::fabs(emb(r, c));
      metrics.dec_emb_row_mean_abs.push_back(acc / static_cast<double>(emb.cols()));
    }
  }

  {
    const auto g_enc_z = analysis::connectivity_graph(model.encoder.W_hz.value, cfg.enc_threshold);
    const auto g_enc_r = analysis::connectivity_graph(model.encoder.W_hr.value, cfg.enc_threshold);
    const auto g_dec_z = analysis::connectivity_graph(model.decoder.W_iz.value, cfg.dec_threshold);
    const auto g_dec_r = analysis::connectivity_graph(model.decoder.W_ir.value, cfg.dec_threshold);
    metrics.enc_edge_fraction = 0.5 * (g_enc_z.kept_fraction() + g_enc_r.kept_fraction());
    metrics.dec_edge_fraction = 0.5 * (g_dec_z.kept_fraction() + g_dec_r.kept_fraction());
    write_file_atomic(dir / ("graph_encoder_W_hz_" + name + ".dot"),
                      analysis::to_dot(g_enc_z, "encoder.gru.W_hz " + name));
    write_file_atomic(dir / ("graph_decoder_W_iz_" + name + ".dot"),
                      analysis::to_dot(g_dec_z, "decoder.gru.W_iz " + name));
  }
}

void write_reports(const ExperimentConfig& cfg, const ReproSummary& summary,
                   const fs::path& out) {
  const fs::path rep = out / "report";
  fs::create_directories(rep);
  const char* cols[4] = {"heldout_compositions", "heldout_inputs", "heldout_tables",
                         "new_compositions"};

  for (const Mode mode : {Mode::Baseline, Mode::AG}) {
    const auto runs = summary.mode_runs(mode);
    if (runs.empty()) continue;
    std::string csv = "run,seed,HC,HI,HT,NC\n";
    int i = 0;
    for (const auto* r : runs) {
      csv += std::to_string(++i) + "," + std::to_string(r->seed);
      for (const auto* split : cols) csv += "," + fmt(r->split_acc.at(split), 2);
      csv += "\n";
    }
    write_file_atomic(rep / (std::string("appendix_") + to_string(mode) + ".csv"), csv);
  }

  {
    std::string csv = "input,model,group_accuracy,full_accuracy,units,overlap\n";
    const std::vector<std::pair<std::string, std::string>> rows{
        {"table-encoder-hidden", "h_enc"},
        {"table-decoder-update-gate", "z_dec"},
        {"table-decoder-reset-gate", "r_dec"}};
    for (const auto& [kind, label] : rows)
      for (const Mode mode : {Mode::Baseline, Mode::AG}) {
        std::vector<double> ga, fa, units, ov;
        for (const auto* r : summary.mode_runs(mode)) {
          auto it = r->probes.find(kind);
          if (it == r->probes.end()) continue;
          ga.push_back(it->second.group_accuracy);
          fa.push_back(it->second.full_accuracy);
          units.push_back(static_cast<double>(it->second.group_size()));
          ov.push_back(it->second.overlap);
        }
        if (ga.empty()) continue;
        csv += label + "," + (mode == Mode::AG ? "AG" : "BL") + "," + fmt(mean(ga)) + "," +
               fmt(mean(fa)) + "," + fmt(mean(units), 1) + "," + fmt(mean(ov)) + "\n";
      }
    write_file_atomic(rep / "table2_probes.csv", csv);
  }

  {
    std::string csv = "input,model,group_accuracy,full_accuracy,units\n";
    for (const Mode mode : {Mode::Baseline, Mode::AG}) {
      std::vector<double> ga, fa, units;
      for (const auto* r : summary.mode_runs(mode)) {
        auto it = r->probes.find("timestep-encoder-hidden");
        if (it == r->probes.end()) continue;
        ga.push_back(it->second.group_accuracy);
        fa.push_back(it->second.full_accuracy);
        units.push_back(static_cast<double>(it->second.group_size()));
      }
      if (ga.empty()) continue;
      csv += std::string("h_enc,") + (mode == Mode::AG ? "AG" : "BL") + "," + fmt(mean(ga)) +
             "," + fmt(mean(fa)) + "," + fmt(mean(units), 1) + "\n";
    }
    write_file_atomic(rep / "table3_timestep.csv", csv);
  }

  {
    std::string csv = "model,component,nc_mean,nc_sd\n";
    for (const Mode mode : {Mode::AG, Mode::Baseline}) {
      std::vector<double> nc;
      for (const auto* r : summary.mode_runs(mode))
        nc.push_back(r->split_acc.at("new_compositions"));
      if (!nc.empty())
        csv += std::string(mode == Mode::AG ? "AG" : "BL") + ",-," + fmt(mean(nc), 2) + "," +
               fmt(stddev(nc), 2) + "\n";
    }
    for (const auto& cell : summary.swaps)
      csv += std::string(cell.cell.host == Mode::AG ? "AG" : "BL") + "," +
             to_string(cell.cell.component) + "," + fmt(cell.mean_nc, 2) + "," +
             fmt(cell.sd_nc, 2) + "\n";
    write_file_atomic(rep / "table4_swap.csv", csv);
  }

  {
    std::string csv = "seed,nc_before,nc_pruned,nc_retrained,mask_respected,kept_enc,kept_dec\n";
    for (const auto& p : summary.prunes)
      csv += std::to_string(p.seed) + "," + fmt(p.nc_before) + "," + fmt(p.nc_pruned) + "," +
             fmt(p.nc_retrained) + "," + (p.mask_ok ? "yes" : "no") + "," +
             std::to_string(p.kept_encoder) + "," + std::to_string(p.kept_decoder) + "\n";
    write_file_atomic(rep / "prune.csv", csv);
  }

  {
    json j;
    for (const Mode mode : {Mode::Baseline, Mode::AG}) {
      std::vector<double> enc, dec, sat;
      for (const auto* r : summary.mode_runs(mode)) {
        enc.push_back(r->enc_edge_fraction);
        dec.push_back(r->dec_edge_fraction);
        sat.push_back(r->right_sat_unit_frac);
      }
      if (enc.empty()) continue;
      j[to_string(mode)] = {{"enc_edge_fraction_mean", mean(enc)},
                            {"dec_edge_fraction_mean", mean(dec)},
                            {"right_sat_unit_frac", sat}};
    }
    j["enc_threshold"] = cfg.enc_threshold;
    j["dec_threshold"] = cfg.dec_threshold;
    write_file_atomic(rep / "edge_saturation.json", j.dump(2) + "\n");
  }

  {
    json j;
    std::vector<double> per_run;
    std::vector<std::size_t> pooled_group;
    for (const auto* r : summary.mode_runs(Mode::AG)) {
      auto it = r->probes.find("table-encoder-hidden");
      if (it == r->probes.end()) continue;
      per_run.push_back(it->second.overlap);
      pooled_group.insert(pooled_group.end(), it->second.group.begin(), it->second.group.end());
    }
    j["per_run"] = per_run;
    j["per_run_mean"] = mean(per_run);
    j["pooled_group_size"] = pooled_group.size();
    write_file_atomic(rep / "overlap.json", j.dump(2) + "\n");
  }
}

void write_manifest(const ExperimentConfig& cfg, const fs::path& out) {
  json files = json::object();
  std::vector<fs::path> paths;
  for (const auto& entry : fs::recursive_directory_iterator(out)) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().filename() == "manifest.json") continue;
    paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());
  for (const auto& p : paths) {
    const std::string content = read_file(p);
    files[fs::relative(p, out).generic_string()] =
        hex64(fnv1a64_bytes(content.data(), content.size()));
  }
  json manifest;
  manifest["config_hash"] = experiment_config_hash(cfg);
  manifest["data_seed"] = cfg.data_seed;
  manifest["seeds"] = cfg.seeds;
  manifest["files"] = files;
  write_file_atomic(out / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace

ReproSummary run_reproduction(const ExperimentConfig& cfg, std::ostream& log_stream) {
  Logger log(log_stream);
  const fs::path out(cfg.out_dir);
  fs::create_directories(out);
  const std::string cfg_hash = experiment_config_hash(cfg);
  const std::string t_hash = stage_train_hash(cfg);
  const std::string a_hash = stage_analysis_hash(cfg);
  const std::string s_hash = stage_swap_hash(cfg);
  const std::string p_hash = stage_prune_hash(cfg);
  write_file_atomic(out / "config.json", experiment_config_to_json(cfg).dump(2) + "\n");

  const std::size_t threads =
      cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  const auto swap_cells = cfg.swap_cells.empty() ? default_swap_cells() : cfg.swap_cells;

  // ---- dataset ----
  const fs::path data_dir = out / "data";
  task::DatasetBundle data;
  bool have_data = false;
  if (cfg.reuse_artifacts && fs::exists(data_dir / "header.json")) {
    try {
      data = task::read_dataset(data_dir);
      have_data = data.seed == cfg.data_seed;
    } catch (...) {
      have_data = false;
    }
  }
  if (!have_data) {
    data = task::generate_dataset(cfg.data_seed);
    task::write_dataset(data, data_dir);
    log.line("data: generated (seed " + std::to_string(cfg.data_seed) + ")");
  } else {
    log.line("data: reused");
  }

  // ---- training + per-run analysis ----
  std::vector<Mode> modes;
  if (cfg.run_baseline) modes.push_back(Mode::Baseline);
  if (cfg.run_ag) modes.push_back(Mode::AG);

  struct RunSlot {
    Mode mode;
    std::uint64_t seed;
    RunMetrics metrics;
  };
  std::vector<RunSlot> slots;
  for (const Mode mode : modes)
    for (const auto seed : cfg.seeds) slots.push_back({mode, seed, {}});

  const fs::path models_dir = out / "models";
  const fs::path analysis_dir = out / "analysis";
  fs::create_directories(models_dir);
  fs::create_directories(analysis_dir);

  std::vector<std::function<void()>> jobs;
  for (auto& slot : slots) {
    jobs.push_back([&cfg, &data, &slot, &models_dir, &analysis_dir, &log, &t_hash, &a_hash] {
      const std::string name = run_name(slot.mode, slot.seed);
      const fs::path stem = models_dir / name;
      const fs::path run_json_path = models_dir / (name + ".run.json");
      const fs::path ana_json_path = analysis_dir / (name + ".json");

      RunMetrics& m = slot.metrics;
      m.mode = slot.mode;
      m.seed = slot.seed;

      if (cfg.reuse_artifacts) {
        const json ana_meta = load_json_if(ana_json_path);
        if (!ana_meta.is_null() && ana_meta.value("config_hash", "") == a_hash) {
          m = run_metrics_from_json(ana_meta.at("metrics"));
          log.line("run " + name + ": reused");
          return;
        }
      }

      seq2seq::Seq2SeqModel model({});
      bool trained = false;
      if (cfg.reuse_artifacts) {
        const json run_meta = load_json_if(run_json_path);
        if (!run_meta.is_null() && run_meta.value("config_hash", "") == t_hash &&
            fs::exists(models_dir / (name + ".json"))) {
          try {
            model = seq2seq::load_checkpoint(stem);
            m.diverged = run_meta.at("diverged").get<bool>();
            m.best_epoch = run_meta.at("best_epoch").get<std::size_t>();
            m.split_acc = run_meta.at("split_acc").get<std::map<std::string, double>>();
            trained = true;
            log.line("train " + name + ": reused checkpoint");
          } catch (...) {
            trained = false;
          }
        }
      }

      if (!trained) {
        seq2seq::ModelConfig mc;
        mc.enc_vocab = data.enc_vocab.size();
        mc.dec_vocab = data.dec_vocab.size();
        mc.hidden = cfg.hidden;
        mc.embed_dim = cfg.embed_dim;
        mc.attn_dim = cfg.attn_dim;
        mc.mode = slot.mode;
        model = seq2seq::Seq2SeqModel(mc);
        num::Rng init_rng = num::Rng(slot.seed).child("init");
        model.init_params(init_rng);

        seq2seq::TrainingConfig tc = cfg.train;
        tc.seed = slot.seed;
        log.line("train " + name + ": start (max " + std::to_string(tc.max_epochs) +
                 " epochs)");
        try {
          const auto result = seq2seq::train(model, data, tc);
          m.best_epoch = result.best_epoch;
          std::string hist = "epoch,train_total,train_nll,train_ag,val_acc,val_loss,selected\n";
          for (const auto& e : result.history)
            hist += std::to_string(e.epoch) + "," + fmt(e.train_total, 6) + "," +
                    fmt(e.train_nll, 6) + "," + fmt(e.train_ag, 6) + "," + fmt(e.val_acc, 4) +
                    "," + fmt(e.val_loss, 6) + "," + (e.selected ? "1" : "0") + "\n";
          write_file_atomic(models_dir / (name + ".history.csv"), hist);
        } catch (const seq2seq::NumericalError& e) {
          m.diverged = true;
          log.line("train " + name + ": diverged (" + std::string(e.what()) + ")");
        }
        if (!m.diverged) m.split_acc = eval_splits(model, data);
        else
          for (const auto* split : kTestSplits) m.split_acc[split] = 0.0;
        seq2seq::save_checkpoint(model, stem);
        json run_meta;
        run_meta["config_hash"] = t_hash;
        run_meta["diverged"] = m.diverged;
        run_meta["best_epoch"] = m.best_epoch;
        run_meta["split_acc"] = m.split_acc;
        write_file_atomic(run_json_path, run_meta.dump(2) + "\n");
        std::string accs;
        for (const auto* split : kTestSplits)
          accs += std::string(" ") + split + "=" + fmt(m.split_acc[split], 2);
        log.line("train " + name + ": done, best epoch " + std::to_string(m.best_epoch) + accs);
      }

      if (!m.diverged) {
        log.line("analyze " + name + ": start");
        analyze_run(cfg, data, model, m, analysis_dir);
        log.line("analyze " + name + ": done");
      }
      json ana_meta;
      ana_meta["config_hash"] = a_hash;
      ana_meta["metrics"] = run_metrics_to_json(m);
      write_file_atomic(ana_json_path, ana_meta.dump(2) + "\n");
    });
  }
  run_jobs(jobs, threads);
  jobs.clear();

  ReproSummary summary;
  for (const auto& slot : slots) summary.runs.push_back(slot.metrics);

  auto run_ok = [&](Mode mode, std::uint64_t seed) {
    for (const auto& r : summary.runs)
      if (r.mode == mode && r.seed == seed) return !r.diverged;
    return false;
  };

  // ---- component substitution ----
  const fs::path swap_dir = out / "swap";
  const bool can_swap = cfg.run_baseline && cfg.run_ag && cfg.swap_pairs > 0;
  struct SwapSlot {
    SwapCellConfig cell;
    std::uint64_t seed;
    ablate::SwapRunResult result;
    bool valid = false;
  };
  std::vector<SwapSlot> swap_slots;
  if (can_swap) {
    fs::create_directories(swap_dir);
    const std::size_t pairs = std::min(cfg.swap_pairs, cfg.seeds.size());
    for (const auto& cell : swap_cells)
      for (std::size_t p = 0; p < pairs; ++p) {
        const auto seed = cfg.seeds[p];
        if (!run_ok(cell.host, seed) ||
            !run_ok(cell.host == Mode::AG ? Mode::Baseline : Mode::AG, seed)) {
          log.line("swap " + std::string(to_string(cell.host)) + "+" +
                   to_string(cell.component) + " seed " + std::to_string(seed) +
                   ": skipped (diverged main run)");
          continue;
        }
        swap_slots.push_back({cell, seed, {}, false});
      }
  } else {
    log.line("swap: skipped (needs both modes and swap_pairs > 0)");
  }

  for (auto& slot : swap_slots) {
    jobs.push_back([&cfg, &data, &slot, &models_dir, &swap_dir, &log, &s_hash] {
      const Mode donor_mode = slot.cell.host == Mode::AG ? Mode::Baseline : Mode::AG;
      const std::string cell_name = std::string(to_string(slot.cell.host)) + "_" +
                                    to_string(slot.cell.component) + "_seed" +
                                    std::to_string(slot.seed);
      const fs::path cache = swap_dir / (cell_name + ".json");
      if (cfg.reuse_artifacts) {
        const json meta = load_json_if(cache);
        if (!meta.is_null() && meta.value("config_hash", "") == s_hash) {
          slot.result.seed = slot.seed;
          slot.result.diverged = meta.at("diverged").get<bool>();
          slot.result.epochs_run = meta.at("epochs_run").get<std::size_t>();
          slot.result.split_accuracy =
              meta.at("split_accuracy").get<std::map<std::string, double>>();
          slot.valid = true;
          log.line("swap " + cell_name + ": reused");
          return;
        }
      }
      auto host = seq2seq::load_checkpoint(models_dir / run_name(slot.cell.host, slot.seed));
      auto donor = seq2seq::load_checkpoint(models_dir / run_name(donor_mode, slot.seed));
      seq2seq::TrainingConfig tc = cfg.train;
      tc.seed = slot.seed;
      tc.max_epochs = cfg.swap_epochs;
      tc.patience = std::max(tc.patience, cfg.swap_epochs);
      log.line("swap " + cell_name + ": start");
      slot.result = ablate::substitute_and_retrain(host, donor, slot.cell.component, data, tc);
      slot.valid = true;
      json meta;
      meta["config_hash"] = s_hash;
      meta["host"] = to_string(slot.cell.host);
      meta["component"] = to_string(slot.cell.component);
      meta["seed"] = slot.seed;
      meta["diverged"] = slot.result.diverged;
      meta["epochs_run"] = slot.result.epochs_run;
      meta["split_accuracy"] = slot.result.split_accuracy;
      write_file_atomic(cache, meta.dump(2) + "\n");
      log.line("swap " + cell_name + ": done, NC=" +
               fmt(slot.result.split_accuracy["new_compositions"], 3));
    });
  }
  run_jobs(jobs, threads);
  jobs.clear();

  for (const auto& cell : swap_cells) {
    SwapCellResult result;
    result.cell = cell;
    std::vector<double> nc;
    for (const auto& slot : swap_slots) {
      if (!slot.valid || slot.cell.host != cell.host || slot.cell.component != cell.component)
        continue;
      result.runs.push_back(slot.result);
      nc.push_back(slot.result.split_accuracy.at("new_compositions"));
    }
    if (result.runs.empty()) continue;
    result.mean_nc = mean(nc);
    result.sd_nc = stddev(nc);
    summary.swaps.push_back(std::move(result));
  }

  // ---- pruning ----
  const fs::path prune_dir = out / "prune";
  struct PruneSlot {
    std::uint64_t seed;
    PruneSeedResult result;
    bool valid = false;
  };
  std::vector<PruneSlot> prune_slots;
  if (cfg.run_ag) {
    fs::create_directories(prune_dir);
    for (const auto seed : cfg.seeds)
      if (run_ok(Mode::AG, seed)) prune_slots.push_back({seed, {}, false});
  }
  for (auto& slot : prune_slots) {
    jobs.push_back([&cfg, &data, &slot, &models_dir, &prune_dir, &log, &p_hash] {
      const std::string name = "ag_seed" + std::to_string(slot.seed);
      const fs::path cache = prune_dir / (name + ".json");
      if (cfg.reuse_artifacts) {
        const json meta = load_json_if(cache);
        if (!meta.is_null() && meta.value("config_hash", "") == p_hash) {
          slot.result.seed = slot.seed;
          slot.result.nc_before = meta.at("nc_before").get<double>();
          slot.result.nc_pruned = meta.at("nc_pruned").get<double>();
          slot.result.nc_retrained = meta.at("nc_retrained").get<double>();
          slot.result.mask_ok = meta.at("mask_ok").get<bool>();
          slot.result.kept_encoder = meta.at("kept_encoder").get<std::size_t>();
          slot.result.kept_decoder = meta.at("kept_decoder").get<std::size_t>();
          slot.valid = true;
          log.line("prune " + name + ": reused");
          return;
        }
      }
      auto model = seq2seq::load_checkpoint(models_dir / run_name(Mode::AG, slot.seed));
      log.line("prune " + name + ": start");
      slot.result.seed = slot.seed;
      slot.result.nc_before =
          seq2seq::evaluate(model, data.new_compositions, data.enc_vocab, data.dec_vocab);
      const auto pruned = ablate::prune_model(model, data, cfg.prune_keep_frac);
      slot.result.nc_pruned = pruned.split_accuracy.at("new_compositions");
      slot.result.kept_encoder = pruned.mask.kept_encoder();
      slot.result.kept_decoder = pruned.mask.kept_decoder();
      seq2seq::TrainingConfig tc = cfg.train;
      tc.seed = slot.seed;
      tc.max_epochs = cfg.prune_retrain_epochs;
      tc.patience = std::max(tc.patience, cfg.prune_retrain_epochs);
      const auto retrained = ablate::retrain_pruned(model, pruned.mask, data, tc);
      slot.result.nc_retrained = retrained.split_accuracy.at("new_compositions");
      slot.result.mask_ok = retrained.mask_respected;
      seq2seq::save_checkpoint(model, prune_dir / (name + "_retrained"));
      slot.valid = true;
      json meta;
      meta["config_hash"] = p_hash;
      meta["seed"] = slot.seed;
      meta["nc_before"] = slot.result.nc_before;
      meta["nc_pruned"] = slot.result.nc_pruned;
      meta["nc_retrained"] = slot.result.nc_retrained;
      meta["mask_ok"] = slot.result.mask_ok;
      meta["kept_encoder"] = slot.result.kept_encoder;
      meta["kept_decoder"] = slot.result.kept_decoder;
      write_file_atomic(cache, meta.dump(2) + "\n");
      log.line("prune " + name + ": done, NC " + fmt(slot.result.nc_before, 2) + " -> " +
               fmt(slot.result.nc_pruned, 2) + " -> " + fmt(slot.result.nc_retrained, 2));
    });
  }
  run_jobs(jobs, threads);
  jobs.clear();
  for (const auto& slot : prune_slots)
    if (slot.valid) summary.prunes.push_back(slot.result);

  // ---- reports ----
  write_reports(cfg, summary, out);
  {
    json j;
    j["config_hash"] = cfg_hash;
    json runs = json::array();
    for (const auto& r : summary.runs) runs.push_back(run_metrics_to_json(r));
    j["runs"] = runs;
    json swaps = json::array();
    for (const auto& c : summary.swaps) {
      json cell;
      cell["host"] = to_string(c.cell.host);
      cell["component"] = to_string(c.cell.component);
      cell["mean_nc"] = c.mean_nc;
      cell["sd_nc"] = c.sd_nc;
      json rr = json::array();
      for (const auto& r : c.runs)
        rr.push_back({{"seed", r.seed},
                      {"diverged", r.diverged},
                      {"split_accuracy", r.split_accuracy},
                      {"epochs_run", r.epochs_run}});
      cell["runs"] = rr;
      swaps.push_back(cell);
    }
    j["swaps"] = swaps;
    json prunes = json::array();
    for (const auto& p : summary.prunes)
      prunes.push_back({{"seed", p.seed},
                        {"nc_before", p.nc_before},
                        {"nc_pruned", p.nc_pruned},
                        {"nc_retrained", p.nc_retrained},
                        {"mask_ok", p.mask_ok},
                        {"kept_encoder", p.kept_encoder},
                        {"kept_decoder", p.kept_decoder}});
    j["prunes"] = prunes;
    write_file_atomic(out / "summary.json", j.dump(2) + "\n");
  }
  write_manifest(cfg, out);
  log.line("reproduction complete: " + out.string());
  return summary;
}

std::vector<CriterionResult> evaluate_criteria(const ReproSummary& summary,
                                               const ExperimentConfig& cfg) {
  std::vector<CriterionResult> out;
  const auto ag = summary.mode_runs(Mode::AG);
  const auto bl = summary.mode_runs(Mode::Baseline);

  auto split_values = [](const std::vector<const RunMetrics*>& runs, const char* split) {
    std::vector<double> v;
    for (const auto* r : runs) v.push_back(r->split_acc.at(split));
    return v;
  };
  auto probe_values = [](const std::vector<const RunMetrics*>& runs, const char* kind,
                         auto&& get) {
    std::vector<double> v;
    for (const auto* r : runs) {
      auto it = r->probes.find(kind);
      if (it != r->probes.end()) v.push_back(get(it->second));
    }
    return v;
  };

  {  // C1: generalization gap
    CriterionResult c{"C1 generalization-gap", false, ""};
    if (ag.empty() || bl.empty()) {
      c.detail = "missing runs";
    } else {
      const auto ag_hc = split_values(ag, "heldout_compositions");
      const auto ag_hi = split_values(ag, "heldout_inputs");
      const auto ag_ht = split_values(ag, "heldout_tables");
      const auto ag_nc = split_values(ag, "new_compositions");
      const auto bl_hc = split_values(bl, "heldout_compositions");
      const auto bl_hi = split_values(bl, "heldout_inputs");
      const auto bl_ht = split_values(bl, "heldout_tables");
      const auto bl_nc = split_values(bl, "new_compositions");
      c.pass = median(ag_hc) >= 0.98 && median(ag_hi) >= 0.98 && median(ag_ht) >= 0.85 &&
               median(ag_nc) >= 0.65 && median(bl_hc) <= 0.35 && median(bl_hi) <= 0.35 &&
               median(bl_ht) <= 0.10 && median(bl_nc) <= 0.10;
      c.detail = "AG HC" + join_values(ag_hc, 2) + " HI" + join_values(ag_hi, 2) + " HT" +
                 join_values(ag_ht, 2) + " NC" + join_values(ag_nc, 2) + " | BL HC" +
                 join_values(bl_hc, 2) + " HI" + join_values(bl_hi, 2) + " HT" +
                 join_values(bl_ht, 2) + " NC" + join_values(bl_nc, 2);
    }
    out.push_back(c);
  }

  {  // C2: table-identity probing
    CriterionResult c{"C2 table-probing", false, ""};
    const auto ag_full = probe_values(ag, "table-encoder-hidden",
                                      [](const auto& p) { return p.full_accuracy; });
    const auto ag_units = probe_values(ag, "table-encoder-hidden",
                                       [](const auto& p) { return double(p.group_size()); });
    const auto bl_units = probe_values(bl, "table-encoder-hidden",
                                       [](const auto& p) { return double(p.group_size()); });
    const auto ag_gate = probe_values(ag, "table-decoder-update-gate",
                                      [](const auto& p) { return p.full_accuracy; });
    const auto bl_gate = probe_values(bl, "table-decoder-update-gate",
                                      [](const auto& p) { return p.full_accuracy; });
    if (ag_full.empty() || bl_units.empty()) {
      c.detail = "missing probe reports";
    } else {
      c.pass = median(ag_full) >= 0.98 && median(ag_units) <= 5.0 && median(bl_units) >= 20.0 &&
               median(ag_gate) >= 0.90 && median(bl_gate) <= 0.60;
      c.detail = "AG h_enc acc" + join_values(ag_full) + " units" + join_values(ag_units, 0) +
                 " | BL units" + join_values(bl_units, 0) + " | AG z_dec acc" +
                 join_values(ag_gate) + " | BL z_dec acc" + join_values(bl_gate);
    }
    out.push_back(c);
  }

  {  // C3: timestep probing
    CriterionResult c{"C3 timestep-probing", false, ""};
    const auto ag_full = probe_values(ag, "timestep-encoder-hidden",
                                      [](const auto& p) { return p.full_accuracy; });
    const auto ag_units = probe_values(ag, "timestep-encoder-hidden",
                                       [](const auto& p) { return double(p.group_size()); });
    const auto bl_units = probe_values(bl, "timestep-encoder-hidden",
                                       [](const auto& p) { return double(p.group_size()); });
    if (ag_full.empty() || bl_units.empty()) {
      c.detail = "missing probe reports";
    } else {
      c.pass = median(ag_full) >= 1.0 && median(ag_units) <= 5.0 && median(bl_units) >= 20.0;
      c.detail = "AG acc" + join_values(ag_full) + " units" + join_values(ag_units, 0) +
                 " | BL units" + join_values(bl_units, 0);
    }
    out.push_back(c);
  }

  {  // C4: top-weight overlap
    CriterionResult c{"C4 top-weight-overlap", false, ""};
    const auto overlaps =
        probe_values(ag, "table-encoder-hidden", [](const auto& p) { return p.overlap; });
    if (overlaps.empty()) {
      c.detail = "missing probe reports";
    } else {
      double m = 0;
      for (double v : overlaps) m += v;
      m /= double(overlaps.size());
      c.pass = m >= 0.8;
      c.detail = "AG group overlap" + join_values(overlaps) + " mean " + fmt(m);
    }
    out.push_back(c);
  }

  {  // C5: gate saturation contrast
    CriterionResult c{"C5 gate-saturation", false, ""};
    std::vector<double> ag_sat, bl_sat;
    for (const auto* r : ag) ag_sat.push_back(r->right_sat_unit_frac);
    for (const auto* r : bl) bl_sat.push_back(r->right_sat_unit_frac);
    if (ag_sat.empty() || bl_sat.empty()) {
      c.detail = "missing runs";
    } else {
      const double fa = median(ag_sat), fb = median(bl_sat);
      c.pass = fa > 0.0 && fa >= 2.0 * fb;
      c.detail = "AG frac" + join_values(ag_sat) + " median " + fmt(fa) + " | BL frac" +
                 join_values(bl_sat) + " median " + fmt(fb);
    }
    out.push_back(c);
  }

  {  // C6: component substitution
    CriterionResult c{"C6 substitution", false, ""};
    const auto* dec = summary.cell(Mode::AG, ablate::ComponentKind::Decoder);
    const auto* enc = summary.cell(Mode::AG, ablate::ComponentKind::Encoder);
    const auto* dwhh = summary.cell(Mode::AG, ablate::ComponentKind::DecoderWhh);
    const auto* ewih = summary.cell(Mode::AG, ablate::ComponentKind::EncoderWih);
    if (!dec || !enc || !dwhh || !ewih || ag.empty()) {
      c.detail = "missing substitution cells";
    } else {
      const double ag_plain = mean(split_values(ag, "new_compositions"));
      double bl_host_max = 0.0;
      std::vector<double> bl_host_values;
      for (const auto& cell : summary.swaps) {
        if (cell.cell.host != Mode::Baseline) continue;
        for (const auto& run : cell.runs) {
          const double v = run.split_accuracy.at("new_compositions");
          bl_host_values.push_back(v);
          bl_host_max = std::max(bl_host_max, v);
        }
      }
      c.pass = dec->mean_nc <= 0.30 && enc->mean_nc <= 0.35 && dwhh->mean_nc >= 0.80 &&
               ewih->mean_nc >= ag_plain && !bl_host_values.empty() && bl_host_max <= 0.10;
      c.detail = "AG+dec " + fmt(dec->mean_nc, 2) + " AG+enc " + fmt(enc->mean_nc, 2) +
                 " AG+decWhh " + fmt(dwhh->mean_nc, 2) + " AG+encWih " + fmt(ewih->mean_nc, 2) +
                 " vs AG-plain " + fmt(ag_plain, 2) + " | BL-host NC" +
                 join_values(bl_host_values, 2) + " max " + fmt(bl_host_max, 2);
    }
    out.push_back(c);
  }

  {  // C7: pruning and recovery
    CriterionResult c{"C7 pruning", false, ""};
    if (summary.prunes.empty()) {
      c.detail = "missing prune results";
    } else {
      std::vector<double> pruned, retrained;
      bool masks_ok = true;
      for (const auto& p : summary.prunes) {
        pruned.push_back(p.nc_pruned);
        retrained.push_back(p.nc_retrained);
        masks_ok = masks_ok && p.mask_ok;
      }
      c.pass = median(pruned) < 0.35 && median(retrained) >= 0.80 && masks_ok;
      c.detail = "pruned NC" + join_values(pruned, 2) + " retrained NC" +
                 join_values(retrained, 2) + " masks " + (masks_ok ? "exact-zero" : "VIOLATED");
    }
    out.push_back(c);
  }

  {  // C8: connectivity threshold calibration
    CriterionResult c{"C8 edge-calibration", false, ""};
    std::vector<double> enc_frac, dec_frac;
    for (const auto& r : summary.runs) {
      if (r.diverged) continue;
      enc_frac.push_back(r.enc_edge_fraction);
      dec_frac.push_back(r.dec_edge_fraction);
    }
    if (enc_frac.empty()) {
      c.detail = "missing runs";
    } else {
      const double em = mean(enc_frac), dm = mean(dec_frac);
      c.pass = em >= 0.005 && em <= 0.015 && dm >= 0.005 && dm <= 0.015;
      c.detail = "encoder@" + fmt(cfg.enc_threshold, 2) + " " + join_values(enc_frac, 4) +
                 " mean " + fmt(em, 4) + " | decoder@" + fmt(cfg.dec_threshold, 2) + " " +
                 join_values(dec_frac, 4) + " mean " + fmt(dm, 4);
    }
    out.push_back(c);
  }

  return out;
}

}  // namespace aglab
