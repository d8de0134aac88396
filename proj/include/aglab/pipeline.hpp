#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aglab/components.hpp"
#include "aglab/probe.hpp"
#include "aglab/swap.hpp"
#include "aglab/train.hpp"

namespace aglab {

struct SwapCellConfig {
  seq2seq::Mode host = seq2seq::Mode::AG;
  ablate::ComponentKind component = ablate::ComponentKind::Decoder;
};

/// Everything a full reproduction run needs; serializable, and echoed
/// into the run directory together with a content hash.
struct ExperimentConfig {
  int version = 1;
  std::uint64_t data_seed = 11;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  bool run_baseline = true;
  bool run_ag = true;
  std::size_t hidden = 512;
  std::size_t embed_dim = 16;
  std::size_t attn_dim = 512;
  seq2seq::TrainingConfig train;  // per-run seed is filled in by the runner
  std::size_t swap_pairs = 3;     // host/donor pairs per substitution cell
  std::size_t swap_epochs = 100;
  std::vector<SwapCellConfig> swap_cells;  // empty = default cell list
  double prune_keep_frac = 0.05;
  std::size_t prune_retrain_epochs = 20;
  std::uint64_t probe_seed = 17;
  std::size_t dist_sample = 50;
  double enc_threshold = 0.2;
  double dec_threshold = 0.17;
  std::size_t threads = 0;  // 0 = hardware concurrency
  bool reuse_artifacts = true;
  std::string out_dir = "reproduce-out";
};

std::vector<SwapCellConfig> default_swap_cells();

nlohmann::ordered_json experiment_config_to_json(const ExperimentConfig& cfg);
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

/// Hash over the result-relevant fields (out_dir/threads/reuse excluded).
std::string experiment_config_hash(const ExperimentConfig& cfg);

struct RunMetrics {
  seq2seq::Mode mode = seq2seq::Mode::Baseline;
  std::uint64_t seed = 0;
  bool diverged = false;
  std::size_t best_epoch = 0;
  std::map<std::string, double> split_acc;
  std::map<std::string, analysis::ProbeReport> probes;  // keyed by probe kind name
  double right_sat_unit_frac = 0.0;   // decoder update gate, cut 0.5
  double enc_edge_fraction = 0.0;     // |W_hz|,|W_hr| >= enc threshold
  double dec_edge_fraction = 0.0;     // |W_iz|,|W_ir| >= dec threshold
  std::vector<double> dec_emb_row_mean_abs;
  std::vector<double> enc_dist_ranges;  // sampled-unit activation ranges
};

struct SwapCellResult {
  SwapCellConfig cell;
  std::vector<ablate::SwapRunResult> runs;
  double mean_nc = 0.0;
  double sd_nc = 0.0;
};

struct PruneSeedResult {
  std::uint64_t seed = 0;
  double nc_before = 0.0;
  double nc_pruned = 0.0;
  double nc_retrained = 0.0;
  bool mask_ok = false;
  std::size_t kept_encoder = 0, kept_decoder = 0;
};

struct ReproSummary {
  std::vector<RunMetrics> runs;
  std::vector<SwapCellResult> swaps;
  std::vector<PruneSeedResult> prunes;

  std::vector<const RunMetrics*> mode_runs(seq2seq::Mode mode) const;
  const SwapCellResult* cell(seq2seq::Mode host, ablate::ComponentKind kind) const;
};

/// Runs (or resumes, when cached artifacts match the config hash) the
/// full pipeline: data, training per mode/seed, the analysis battery,
/// component substitutions and pruning, then writes the report tables.
ReproSummary run_reproduction(const ExperimentConfig& cfg, std::ostream& log);

struct CriterionResult {
  std::string id;
  bool pass = false;
  std::string detail;
};

/// The trained-model acceptance checks (generalization gap, probing,
/// overlap, saturation, substitution, pruning, edge calibration).
std::vector<CriterionResult> evaluate_criteria(const ReproSummary& summary,
                                               const ExperimentConfig& cfg);

double median(std::vector<double> v);

}  // namespace aglab
