#include "aglab/graph.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace aglab::analysis {

ConnectivityGraph connectivity_graph(const num::Matrix& w, double threshold) {
  if (threshold < 0.0)
    throw std::invalid_argument("connectivity_graph: threshold must be non-negative");
  ConnectivityGraph g;
  g.senders = w.cols();
  g.receivers = w.rows();
  g.threshold = threshold;
  g.out_degree.assign(w.cols(), 0);
  g.in_degree.assign(w.rows(), 0);
  for (std::size_t i = 0; i < w.rows(); ++i)
    for (std::size_t j = 0; j < w.cols(); ++j) {
      const double v = w(i, j);
      if (std::fabs(v) >= threshold) {
        g.edges.push_back({j, i, v});
        ++g.out_degree[j];
        ++g.in_degree[i];
      }
    }
  return g;
}

std::string to_dot(const ConnectivityGraph& g, const std::string& name) {
  char buf[128];
  std::string out = "digraph \"" + name + "\" {\n";
  std::snprintf(buf, sizeof buf, "  // threshold %.6g, edges %zu / %zu (%.4f%%)\n", g.threshold,
                g.edges.size(), g.senders * g.receivers, 100.0 * g.kept_fraction());
  out += buf;
  out += "  rankdir=BT;\n  node [shape=point];\n";
  for (std::size_t j = 0; j < g.senders; ++j) {
    if (g.out_degree[j] == 0) continue;
    std::snprintf(buf, sizeof buf, "  s%zu [degree=%zu];\n", j, g.out_degree[j]);
    out += buf;
  }
  for (std::size_t i = 0; i < g.receivers; ++i) {
    if (g.in_degree[i] == 0) continue;
    std::snprintf(buf, sizeof buf, "  r%zu [degree=%zu];\n", i, g.in_degree[i]);
    out += buf;
  }
  for (const auto& e : g.edges) {
    std::snprintf(buf, sizeof buf, "  s%zu -> r%zu [weight=\"%.6g\", color=%s];\n", e.from, e.to,
                  e.weight, e.weight >= 0 ? "red" : "blue");
    out += buf;
  }
  out += "}\n";
  return out;
}

}  // namespace aglab::analysis
