#pragma once

#include <string>
#include <vector>

#include "aglab/matrix.hpp"

namespace aglab::analysis {

struct WeightEdge {
  std::size_t from;  // sending unit (column)
  std::size_t to;    // receiving unit (row)
  double weight;
};

struct ConnectivityGraph {
  std::size_t senders = 0, receivers = 0;
  double threshold = 0.0;
  std::vector<WeightEdge> edges;
  std::vector<std::size_t> out_degree;  // per sender
  std::vector<std::size_t> in_degree;   // per receiver

  double kept_fraction() const {
    const double total = static_cast<double>(senders) * static_cast<double>(receivers);
    return total == 0.0 ? 0.0 : static_cast<double>(edges.size()) / total;
  }
};

/// Edge (sender j -> receiver i) kept iff |w(i,j)| >= threshold.
/// threshold 0 keeps the complete bipartite set; negative thresholds
/// are rejected.
ConnectivityGraph connectivity_graph(const num::Matrix& w, double threshold);

/// DOT rendering; edges carry sign (color) and magnitude, nodes carry
/// their degree, and the preamble comments hold the summary statistics.
std::string to_dot(const ConnectivityGraph& g, const std::string& name);

}  // namespace aglab::analysis
