#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "aglab/checkpoint.hpp"
#include "aglab/graph.hpp"
#include "aglab/heatmap.hpp"
#include "aglab/io_util.hpp"
#include "aglab/pipeline.hpp"
#include "aglab/probe.hpp"
#include "aglab/prune.hpp"
#include "aglab/stats.hpp"
#include "aglab/strength.hpp"
#include "aglab/svg.hpp"
#include "aglab/swap.hpp"
#include "aglab/trace.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace aglab;

namespace {

fs::path out_root() {
  if (const char* env = std::getenv("AGLAB_OUT_ROOT")) return env;
  return "aglab-out";
}

std::vector<std::uint64_t> parse_seeds(const std::string& csv) {
  std::vector<std::uint64_t> seeds;
  std::size_t start = 0;
  while (start <= csv.size()) {
    auto comma = csv.find(',', start);
    const std::string tok = csv.substr(start, comma == std::string::npos ? comma : comma - start);
    if (!tok.empty()) seeds.push_back(std::stoull(tok));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (seeds.empty()) throw std::invalid_argument("no seeds in '" + csv + "'");
  return seeds;
}

task::DatasetBundle load_data(const std::string& dir) { return task::read_dataset(dir); }

std::vector<task::Example> gather_split(const task::DatasetBundle& data,
                                        const std::string& split) {
  if (split == "all-tests") {
    std::vector<task::Example> out;
    for (const auto* name : {"heldout_compositions", "heldout_inputs", "heldout_tables",
                             "new_compositions"}) {
      const auto& s = data.split(name);
      out.insert(out.end(), s.begin(), s.end());
    }
    return out;
  }
  if (split == "all-compositions") return data.all_compositions();
  return data.split(split);
}

int cmd_gen_data(std::uint64_t seed, const std::string& out) {
  const auto bundle = task::generate_dataset(seed);
  task::write_dataset(bundle, out);
  std::cout << "wrote dataset (seed " << seed << ") to " << out << "\n";
  return 0;
}

int cmd_train(const std::string& data_dir, const std::string& mode_s, std::uint64_t seed,
              const std::string& out, seq2seq::TrainingConfig tc, std::size_t hidden,
              std::size_t embed_dim, std::size_t attn_dim, bool verbose) {
  const auto data = load_data(data_dir);
  seq2seq::ModelConfig mc;
  mc.enc_vocab = data.enc_vocab.size();
  mc.dec_vocab = data.dec_vocab.size();
  mc.hidden = hidden;
  mc.embed_dim = embed_dim;
  mc.attn_dim = attn_dim ? attn_dim : hidden;
  mc.mode = seq2seq::mode_from_string(mode_s);
  seq2seq::Seq2SeqModel model(mc);
  num::Rng init_rng = num::Rng(seed).child("init");
  model.init_params(init_rng);
  tc.seed = seed;
  tc.verbose = verbose;

  const auto result = seq2seq::train(model, data, tc);
  fs::path stem(out);
  if (stem.has_parent_path()) fs::create_directories(stem.parent_path());
  seq2seq::save_checkpoint(model, stem);
  std::string hist = "epoch,train_total,train_nll,train_ag,val_acc,val_loss,selected\n";
  char buf[160];
  for (const auto& e : result.history) {
    std::snprintf(buf, sizeof buf, "%zu,%.6f,%.6f,%.6f,%.4f,%.6f,%d\n", e.epoch, e.train_total,
                  e.train_nll, e.train_ag, e.val_acc, e.val_loss, e.selected ? 1 : 0);
    hist += buf;
  }
  fs::path hist_path(stem);
  hist_path += ".history.csv";
  write_file_atomic(hist_path, hist);
  std::cout << "trained " << mode_s << " seed " << seed << ": best epoch " << result.best_epoch
            << " (val acc " << result.best_val_acc << ")\ncheckpoint: " << stem << ".json/.bin\n";
  return 0;
}

int cmd_eval(const std::string& ckpt, const std::string& data_dir, const std::string& split,
             const std::string& out) {
  const auto data = load_data(data_dir);
  auto model = seq2seq::load_checkpoint(ckpt);
  json results;
  auto one = [&](const std::string& name) {
    const double acc = seq2seq::evaluate(model, data.split(name), data.enc_vocab, data.dec_vocab);
    results[name] = acc;
    std::cout << name << "\t" << acc << "\n";
  };
  if (split == "all") {
    for (const auto& name : task::DatasetBundle::split_names())
      if (name != "train") one(name);
  } else {
    one(split);
  }
  if (!out.empty()) write_file_atomic(out, results.dump(2) + "\n");
  return 0;
}

int cmd_trace(const std::string& ckpt, const std::string& data_dir, const std::string& split,
              const std::string& out) {
  const auto data = load_data(data_dir);
  auto model = seq2seq::load_checkpoint(ckpt);
  const auto examples = gather_split(data, split);
  const auto traces = analysis::capture_traces(model, examples, data.enc_vocab, data.dec_vocab);
  fs::path stem(out);
  if (stem.has_parent_path()) fs::create_directories(stem.parent_path());
  analysis::write_traces(traces, stem);
  std::cout << "wrote " << traces.size() << " traces to " << stem << ".json/.bin\n";
  return 0;
}

int cmd_analyze(const std::string& what, const std::string& ckpt, const std::string& traces_stem,
                const std::string& data_dir, const std::string& matrix, double threshold,
                const std::string& gate_s, std::size_t k, std::uint64_t seed,
                const std::string& out_s) {
  const fs::path out(out_s);
  fs::create_directories(out);

  auto need_traces = [&]() {
    if (!traces_stem.empty()) return analysis::read_traces(traces_stem);
    if (ckpt.empty() || data_dir.empty())
      throw std::invalid_argument("analyze --what " + what +
                                  " needs --traces or --checkpoint plus --data");
    const auto data = load_data(data_dir);
    auto model = seq2seq::load_checkpoint(ckpt);
    const bool probing = what.rfind("probe", 0) == 0;
    const auto examples = gather_split(data, probing ? "all-compositions" : "all-tests");
    return analysis::capture_traces(model, examples, data.enc_vocab, data.dec_vocab);
  };

  if (what == "heatmap" || what == "graph") {
    if (ckpt.empty()) throw std::invalid_argument("analyze --what " + what + " needs --checkpoint");
    auto model = seq2seq::load_checkpoint(ckpt);
    const auto& m = model.param(matrix).value;
    std::string base = matrix;
    for (auto& ch : base)
      if (ch == '.') ch = '_';
    if (what == "heatmap") {
      analysis::export_heatmap_csv(m, matrix, out / ("heatmap_" + base + ".csv"));
      write_file_atomic(out / ("heatmap_" + base + ".svg"), analysis::heatmap_svg(m, matrix));
      std::cout << "wrote heatmap_" << base << ".csv/.svg\n";
    } else {
      const auto g = analysis::connectivity_graph(m, threshold);
      write_file_atomic(out / ("graph_" + base + ".dot"), analysis::to_dot(g, matrix));
      std::cout << "wrote graph_" << base << ".dot (kept " << g.edges.size() << " edges, "
                << g.kept_fraction() * 100.0 << "%)\n";
    }
    return 0;
  }

  if (what == "saturation") {
    const auto traces = need_traces();
    std::string csv = "half,gate,unit,left,right\n";
    std::vector<analysis::ScatterSeries> series;
    char buf[128];
    for (const auto half : {analysis::Half::Encoder, analysis::Half::Decoder})
      for (const auto gate : {analysis::Gate::Update, analysis::Gate::Reset}) {
        const auto sat = analysis::gate_saturation(traces, half, gate);
        analysis::ScatterSeries s;
        s.label = std::string(to_string(half)) + " " + to_string(gate);
        s.color = gate == analysis::Gate::Update ? "#1f77b4" : "#d62728";
        for (std::size_t u = 0; u < sat.left.size(); ++u) {
          std::snprintf(buf, sizeof buf, "%s,%s,%zu,%.6f,%.6f\n", to_string(half),
                        to_string(gate), u, sat.left[u], sat.right[u]);
          csv += buf;
          s.points.emplace_back(sat.left[u], sat.right[u]);
        }
        series.push_back(std::move(s));
      }
    write_file_atomic(out / "saturation.csv", csv);
    write_file_atomic(out / "saturation.svg",
                      analysis::scatter_svg(series, "gate saturation", "left-saturated",
                                            "right-saturated"));
    std::cout << "wrote saturation.csv/.svg\n";
    return 0;
  }

  if (what == "dists") {
    const auto traces = need_traces();
    num::Rng rng(seed);
    std::string csv = "half,unit,min,q1,median,q3,max\n";
    char buf[160];
    for (const auto half : {analysis::Half::Encoder, analysis::Half::Decoder}) {
      num::Rng sub = rng.child(to_string(half));
      for (const auto& d : analysis::activation_distributions(traces, half, k, sub)) {
        std::snprintf(buf, sizeof buf, "%s,%zu,%.6f,%.6f,%.6f,%.6f,%.6f\n", to_string(half),
                      d.unit, d.min, d.q1, d.median, d.q3, d.max);
        csv += buf;
      }
    }
    write_file_atomic(out / "dists.csv", csv);
    std::cout << "wrote dists.csv\n";
    return 0;
  }

  if (what == "probe-table" || what == "probe-timestep" || what == "probe-gate") {
    analysis::ProbeKind kind = analysis::ProbeKind::TableEncoderHidden;
    if (what == "probe-timestep") kind = analysis::ProbeKind::TimestepEncoderHidden;
    if (what == "probe-gate")
      kind = gate_s == "reset" ? analysis::ProbeKind::TableDecoderResetGate
                               : analysis::ProbeKind::TableDecoderUpdateGate;
    const auto traces = need_traces();
    analysis::ProbeConfig pcfg;
    pcfg.seed = seed;
    const auto dataset = analysis::make_probe_dataset(traces, kind, pcfg);
    std::vector<std::size_t> all_units(dataset.x.cols());
    for (std::size_t i = 0; i < all_units.size(); ++i) all_units[i] = i;
    const auto full = analysis::train_probe(dataset, all_units, pcfg);
    const double full_acc = analysis::probe_accuracy(full, dataset, all_units, dataset.eval_rows);
    auto report = analysis::functional_group(dataset, full, full_acc, pcfg);
    report.kind = to_string(kind);
    if (!ckpt.empty()) {
      auto model = seq2seq::load_checkpoint(ckpt);
      const bool decoder_side = kind == analysis::ProbeKind::TableDecoderUpdateGate ||
                                kind == analysis::ProbeKind::TableDecoderResetGate;
      const auto strength = analysis::neuron_strength(
          model, decoder_side ? analysis::Half::Decoder : analysis::Half::Encoder);
      report.overlap = analysis::top_weight_overlap(report.group, strength, 0.05);
    }
    json j;
    j["kind"] = report.kind;
    j["full_accuracy"] = report.full_accuracy;
    j["group_accuracy"] = report.group_accuracy;
    j["group_size"] = report.group_size();
    j["group"] = report.group;
    j["overlap"] = report.overlap;
    json curve = json::array();
    for (const auto& [units, acc] : report.curve)
      curve.push_back({{"units", units}, {"accuracy", acc}});
    j["curve"] = curve;
    const fs::path path = out / (what + ".json");
    write_file_atomic(path, j.dump(2) + "\n");
    std::cout << "wrote " << path.filename().string() << " (full " << report.full_accuracy
              << ", group " << report.group_size() << " @ " << report.group_accuracy << ")\n";
    return 0;
  }

  throw std::invalid_argument("unknown --what '" + what + "'");
}

int cmd_swap(const std::string& host, const std::string& donor, const std::string& component,
             const std::string& data_dir, const std::string& seeds_csv, std::size_t epochs,
             const std::string& out_s) {
  const auto data = load_data(data_dir);
  const auto host_model = seq2seq::load_checkpoint(host);
  const auto donor_model = seq2seq::load_checkpoint(donor);
  const auto kind = ablate::component_from_string(component);
  const auto seeds = parse_seeds(seeds_csv);
  const fs::path out(out_s);
  fs::create_directories(out);

  json runs = json::array();
  std::vector<double> nc;
  for (const auto seed : seeds) {
    seq2seq::TrainingConfig tc;
    tc.seed = seed;
    tc.max_epochs = epochs;
    tc.patience = epochs;
    const auto r = ablate::substitute_and_retrain(host_model, donor_model, kind, data, tc);
    runs.push_back({{"seed", seed},
                    {"diverged", r.diverged},
                    {"split_accuracy", r.split_accuracy},
                    {"epochs_run", r.epochs_run}});
    nc.push_back(r.split_accuracy.at("new_compositions"));
    std::cout << "seed " << seed << ": NC " << r.split_accuracy.at("new_compositions")
              << (r.diverged ? " (diverged)" : "") << "\n";
  }
  double m = 0;
  for (double v : nc) m += v;
  m /= nc.empty() ? 1.0 : double(nc.size());
  json j;
  j["host"] = to_string(host_model.mode());
  j["component"] = component;
  j["runs"] = runs;
  j["nc_mean"] = m;
  write_file_atomic(out / ("swap_" + component + ".json"), j.dump(2) + "\n");
  std::cout << "mean NC " << m << "\n";
  return 0;
}

int cmd_prune(const std::string& ckpt, const std::string& data_dir, double keep_frac,
              std::size_t retrain_epochs, bool force, const std::string& out_s) {
  const auto data = load_data(data_dir);
  auto model = seq2seq::load_checkpoint(ckpt);
  const fs::path out(out_s);
  fs::create_directories(out);

  const double before =
      seq2seq::evaluate(model, data.new_compositions, data.enc_vocab, data.dec_vocab);
  const auto pruned = ablate::prune_model(model, data, keep_frac, force);
  json j;
  j["keep_frac"] = keep_frac;
  j["kept_encoder"] = pruned.mask.kept_encoder();
  j["kept_decoder"] = pruned.mask.kept_decoder();
  j["nc_before"] = before;
  j["after_prune"] = pruned.split_accuracy;
  std::cout << "NC before " << before << ", after prune "
            << pruned.split_accuracy.at("new_compositions") << "\n";
  if (retrain_epochs > 0) {
    seq2seq::TrainingConfig tc;
    tc.max_epochs = retrain_epochs;
    tc.patience = retrain_epochs;
    const auto retrained = ablate::retrain_pruned(model, pruned.mask, data, tc);
    j["after_retrain"] = retrained.split_accuracy;
    j["mask_respected"] = retrained.mask_respected;
    std::cout << "after " << retrain_epochs << "-epoch retrain "
              << retrained.split_accuracy.at("new_compositions") << " (mask "
              << (retrained.mask_respected ? "exact-zero" : "VIOLATED") << ")\n";
  }
  seq2seq::save_checkpoint(model, out / "pruned");
  write_file_atomic(out / "prune.json", j.dump(2) + "\n");
  return 0;
}

int cmd_reproduce(ExperimentConfig cfg) {
  const auto summary = run_reproduction(cfg, std::cerr);
  const auto criteria = evaluate_criteria(summary, cfg);
  bool all = true;
  for (const auto& c : criteria) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.id << ": " << c.detail << "\n";
    all = all && c.pass;
  }
  std::cout << (all ? "all reproduction checks passed\n" : "some reproduction checks failed\n");
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"training and dissection lab for attention-guided vs baseline GRU seq2seq "
               "models on the lookup-table composition task"};
  app.require_subcommand(1);
  std::function<int()> action;

  {
    auto* cmd = app.add_subcommand("gen-data", "generate the dataset bundle");
    auto seed = std::make_shared<std::uint64_t>(11);
    auto out = std::make_shared<std::string>((out_root() / "data").string());
    cmd->add_option("--seed", *seed, "generation seed");
    cmd->add_option("--out", *out, "output directory");
    cmd->callback([=, &action] { action = [=] { return cmd_gen_data(*seed, *out); }; });
  }

  {
    auto* cmd = app.add_subcommand("train", "train one model");
    auto data = std::make_shared<std::string>();
    auto mode = std::make_shared<std::string>("baseline");
    auto seed = std::make_shared<std::uint64_t>(1);
    auto out = std::make_shared<std::string>((out_root() / "model").string());
    auto config_path = std::make_shared<std::string>();
    auto tc = std::make_shared<seq2seq::TrainingConfig>();
    auto verbose = std::make_shared<bool>(false);
    cmd->add_option("--data", *data, "dataset directory")->required();
    cmd->add_option("--mode", *mode, "baseline | ag")->required();
    cmd->add_option("--seed", *seed, "training seed");
    cmd->add_option("--out", *out, "checkpoint stem (writes stem.json/.bin)");
    cmd->add_option("--config", *config_path, "JSON config file (flags override it)");
    auto* epochs = cmd->add_option("--epochs", tc->max_epochs, "max epochs");
    auto* lr = cmd->add_option("--lr", tc->lr, "Adam learning rate");
    auto* lambda = cmd->add_option("--lambda", tc->lambda_ag, "attention loss weight");
    auto* valf = cmd->add_option("--val-fraction", tc->val_fraction, "validation carve-out");
    auto* patience = cmd->add_option("--patience", tc->patience, "selection patience");
    auto hidden = std::make_shared<std::size_t>(512);
    auto embed_dim = std::make_shared<std::size_t>(16);
    auto attn_dim = std::make_shared<std::size_t>(0);
    cmd->add_option("--hidden", *hidden, "hidden units");
    cmd->add_option("--embed-dim", *embed_dim, "embedding size");
    cmd->add_option("--attn-dim", *attn_dim, "scorer hidden size (0 = hidden)");
    cmd->add_flag("--verbose", *verbose, "per-epoch log to stderr");
    cmd->callback([=, &action] {
      action = [=] {
        seq2seq::TrainingConfig base;
        if (!config_path->empty()) {
          const auto j = json::parse(read_file(*config_path));
          base = experiment_config_from_json(j).train;
        }
        if (epochs->count()) base.max_epochs = tc->max_epochs;
        if (lr->count()) base.lr = tc->lr;
        if (lambda->count()) base.lambda_ag = tc->lambda_ag;
        if (valf->count()) base.val_fraction = tc->val_fraction;
        if (patience->count()) base.patience = tc->patience;
        return cmd_train(*data, *mode, *seed, *out, base, *hidden, *embed_dim, *attn_dim,
                         *verbose);
      };
    });
  }

  {
    auto* cmd = app.add_subcommand("eval", "sequence accuracy of a checkpoint");
    auto ckpt = std::make_shared<std::string>();
    auto data = std::make_shared<std::string>();
    auto split = std::make_shared<std::string>("all");
    auto out = std::make_shared<std::string>();
    cmd->add_option("--checkpoint", *ckpt, "checkpoint stem")->required();
    cmd->add_option("--data", *data, "dataset directory")->required();
    cmd->add_option("--split", *split, "split name or 'all'");
    cmd->add_option("--out", *out, "optional JSON output file");
    cmd->callback(
        [=, &action] { action = [=] { return cmd_eval(*ckpt, *data, *split, *out); }; });
  }

  {
    auto* cmd = app.add_subcommand("trace", "capture activation traces");
    auto ckpt = std::make_shared<std::string>();
    auto data = std::make_shared<std::string>();
    auto split = std::make_shared<std::string>("all-tests");
    auto out = std::make_shared<std::string>((out_root() / "traces").string());
    cmd->add_option("--checkpoint", *ckpt, "checkpoint stem")->required();
    cmd->add_option("--data", *data, "dataset directory")->required();
    cmd->add_option("--split", *split,
                    "split name, 'all-tests' or 'all-compositions'");
    cmd->add_option("--out", *out, "archive stem (writes stem.json/.bin)");
    cmd->callback(
        [=, &action] { action = [=] { return cmd_trace(*ckpt, *data, *split, *out); }; });
  }

  {
    auto* cmd = app.add_subcommand("analyze", "inspection and probing artifacts");
    auto what = std::make_shared<std::string>();
    auto ckpt = std::make_shared<std::string>();
    auto traces = std::make_shared<std::string>();
    auto data = std::make_shared<std::string>();
    auto matrix = std::make_shared<std::string>("decoder.embedding");
    auto threshold = std::make_shared<double>(0.2);
    auto gate = std::make_shared<std::string>("update");
    auto k = std::make_shared<std::size_t>(50);
    auto seed = std::make_shared<std::uint64_t>(17);
    auto out = std::make_shared<std::string>((out_root() / "analysis").string());
    cmd->add_option("--what", *what,
                    "heatmap | graph | saturation | dists | probe-table | probe-timestep | "
                    "probe-gate")
        ->required();
    cmd->add_option("--checkpoint", *ckpt, "checkpoint stem");
    cmd->add_option("--traces", *traces, "trace archive stem");
    cmd->add_option("--data", *data, "dataset directory");
    cmd->add_option("--matrix", *matrix, "tensor name for heatmap/graph");
    cmd->add_option("--threshold", *threshold, "graph threshold");
    cmd->add_option("--gate", *gate, "update | reset (probe-gate)");
    cmd->add_option("--k", *k, "sampled units (dists)");
    cmd->add_option("--seed", *seed, "analysis seed");
    cmd->add_option("--out", *out, "output directory");
    cmd->callback([=, &action] {
      action = [=] {
        return cmd_analyze(*what, *ckpt, *traces, *data, *matrix, *threshold, *gate, *k, *seed,
                           *out);
      };
    });
  }

  {
    auto* cmd = app.add_subcommand("swap", "frozen component substitution + retraining");
    auto host = std::make_shared<std::string>();
    auto donor = std::make_shared<std::string>();
    auto component = std::make_shared<std::string>();
    auto data = std::make_shared<std::string>();
    auto seeds = std::make_shared<std::string>("1,2,3");
    auto epochs = std::make_shared<std::size_t>(100);
    auto out = std::make_shared<std::string>((out_root() / "swap").string());
    cmd->add_option("--host", *host, "host checkpoint stem")->required();
    cmd->add_option("--donor", *donor, "donor checkpoint stem")->required();
    cmd->add_option("--component", *component,
                    "encoder | decoder | encoder-embedding | decoder-embedding | encoder-wih | "
                    "encoder-whh | decoder-wih | decoder-whh")
        ->required();
    cmd->add_option("--data", *data, "dataset directory")->required();
    cmd->add_option("--seeds", *seeds, "comma-separated retraining seeds");
    cmd->add_option("--epochs", *epochs, "retraining epochs");
    cmd->add_option("--out", *out, "output directory");
    cmd->callback([=, &action] {
      action = [=] { return cmd_swap(*host, *donor, *component, *data, *seeds, *epochs, *out); };
    });
  }

  {
    auto* cmd = app.add_subcommand("prune", "keep only the strongest units, then retrain");
    auto ckpt = std::make_shared<std::string>();
    auto data = std::make_shared<std::string>();
    auto keep = std::make_shared<double>(0.05);
    auto epochs = std::make_shared<std::size_t>(20);
    auto force = std::make_shared<bool>(false);
    auto out = std::make_shared<std::string>((out_root() / "prune").string());
    cmd->add_option("--checkpoint", *ckpt, "checkpoint stem")->required();
    cmd->add_option("--data", *data, "dataset directory")->required();
    cmd->add_option("--keep-frac", *keep, "fraction of units to keep per half");
    cmd->add_option("--retrain-epochs", *epochs, "recovery retraining epochs");
    cmd->add_flag("--force", *force, "allow masks that keep no units");
    cmd->add_option("--out", *out, "output directory");
    cmd->callback([=, &action] {
      action = [=] { return cmd_prune(*ckpt, *data, *keep, *epochs, *force, *out); };
    });
  }

  {
    auto* cmd = app.add_subcommand("reproduce", "full pipeline over seeds and both modes");
    auto config_path = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto seeds = std::make_shared<std::string>();
    auto threads = std::make_shared<std::size_t>(0);
    auto no_reuse = std::make_shared<bool>(false);
    cmd->add_option("--config", *config_path, "JSON config file (flags override it)");
    auto* out_opt = cmd->add_option("--out", *out, "run directory");
    auto* seeds_opt = cmd->add_option("--seeds", *seeds, "comma-separated seeds");
    auto* threads_opt = cmd->add_option("--threads", *threads, "worker threads (0 = hardware)");
    cmd->add_flag("--no-reuse", *no_reuse, "ignore cached artifacts");
    cmd->callback([=, &action] {
      action = [=] {
        ExperimentConfig cfg;
        if (!config_path->empty())
          cfg = experiment_config_from_json(json::parse(read_file(*config_path)));
        else
          cfg.out_dir = (out_root() / "reproduce").string();
        if (out_opt->count()) cfg.out_dir = *out;
        if (seeds_opt->count()) cfg.seeds = parse_seeds(*seeds);
        if (threads_opt->count()) cfg.threads = *threads;
        if (*no_reuse) cfg.reuse_artifacts = false;
        return cmd_reproduce(cfg);
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    return action();
  } catch (const seq2seq::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
