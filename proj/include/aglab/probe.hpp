#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aglab/matrix.hpp"
#include "aglab/rng.hpp"
#include "aglab/trace.hpp"

namespace aglab::analysis {

enum class ProbeKind {
  TableEncoderHidden,     // predict the current table from encoder h_t
  TableDecoderUpdateGate, // ... from decoder z_t
  TableDecoderResetGate,  // ... from decoder r_t
  TimestepEncoderHidden,  // predict the encoder step index from h_t
};

const char* to_string(ProbeKind k);

/// Rows harvested from traces plus a seeded train/eval split. Reported
/// accuracies are computed on the held-out eval rows.
struct ProbeDataset {
  num::Matrix x;            // [rows x units]
  std::vector<int> labels;  // in [0, n_classes)
  std::size_t n_classes = 0;
  std::vector<std::size_t> train_rows, eval_rows;
};

struct ProbeConfig {
  std::size_t max_iters = 5000;
  double tol = 1e-7;  // stop when the loss delta falls below this
  double eval_fraction = 0.25;
  std::uint64_t seed = 17;
};

ProbeDataset make_probe_dataset(const std::vector<ActivationTrace>& traces, ProbeKind kind,
                                const ProbeConfig& cfg);

/// Unregularized multinomial logistic regression, full-batch gradient
/// descent from zero init with backtracking step control. Deterministic.
struct LinearProbe {
  num::Matrix w;          // [n_classes x n_units]
  std::vector<double> b;  // [n_classes]
  std::size_t iters = 0;
  double final_loss = 0.0;

  int predict(const double* x, const std::vector<std::size_t>& units) const;
};

LinearProbe train_probe(const ProbeDataset& data, const std::vector<std::size_t>& units,
                        const ProbeConfig& cfg);

double probe_accuracy(const LinearProbe& probe, const ProbeDataset& data,
                      const std::vector<std::size_t>& units,
                      const std::vector<std::size_t>& rows);

/// Units ranked by summed |classifier weight| across classes, strongest
/// first (stable on ties).
std::vector<std::size_t> rank_units(const LinearProbe& probe);

struct ProbeReport {
  std::string kind;
  double full_accuracy = 0.0;
  std::vector<std::size_t> group;  // prefix of the unit ranking
  double group_accuracy = 0.0;
  double overlap = -1.0;  // filled by top_weight_overlap when computed
  std::vector<std::pair<std::size_t, double>> curve;  // (prefix size, accuracy)

  std::size_t group_size() const { return group.size(); }
};

/// Grows the ranked-unit prefix (step 1 up to 64, then geometric),
/// retraining a restricted probe at each size, until the restricted
/// accuracy reaches ratio * full accuracy.
ProbeReport functional_group(const ProbeDataset& data, const LinearProbe& full_probe,
                             double full_accuracy, const ProbeConfig& cfg, double ratio = 0.95);

/// |group ∩ strongest ceil(frac*n) units| / |group|.
double top_weight_overlap(const std::vector<std::size_t>& group,
                          const std::vector<double>& strength, double frac = 0.05);

}  // namespace aglab::analysis
