#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "aglab/matrix.hpp"
#include "aglab/param.hpp"

namespace aglab::num {

using NodeId = std::size_t;

/// Reverse-mode accumulation tape over vector-valued intermediates.
///
/// Activations live on the tape as nodes; parameters enter operations as
/// Parameter references and receive their gradients directly (skipped
/// when frozen). Built for batch-one recurrent graphs: a forward pass
/// records nodes, backward() runs the recorded closures in reverse.
///
/// A non-recording tape computes values only; backward() on it is a
/// usage error. This is the inference path.
class Tape {
 public:
  explicit Tape(bool recording = true) : recording_(recording) {}

  bool recording() const { return recording_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t clamp_count() const { return clamp_count_; }

  const std::vector<double>& value(NodeId id) const { return nodes_[id].value; }
  const std::vector<double>& grad(NodeId id) const;

  /// Drop all nodes; keeps the tape reusable across examples.
  void reset();

  NodeId input(std::vector<double> v);

  /// Row lookup into an embedding table [vocab x dim].
  NodeId embed(Parameter& table, std::size_t row);

  /// W x for W [m x n], x of length n.
  NodeId matvec(Parameter& w, NodeId x);

  /// W[:, col0 : col0+len(x)] x — used where one weight matrix acts on a
  /// concatenation without materializing the concat.
  NodeId matvec_cols(Parameter& w, NodeId x, std::size_t col0);

  NodeId add(NodeId a, NodeId b);
  NodeId add_bias(NodeId x, Parameter& bias);  // bias stored [1 x n]
  NodeId sigmoid(NodeId x);
  NodeId tanh(NodeId x);
  NodeId hadamard(NodeId a, NodeId b);

  /// (1 - z) ∘ h_prev + z ∘ h_tilde — the GRU state mix.
  NodeId blend(NodeId z, NodeId h_prev, NodeId h_tilde);

  /// Concatenate scalar (length-1) nodes into one vector node.
  NodeId gather(const std::vector<NodeId>& scalars);

  /// Stable softmax over a vector node.
  NodeId softmax(NodeId scores);

  /// sum_i weights[i] * vectors[i]; weights length must equal vectors count.
  NodeId weighted_sum(NodeId weights, const std::vector<NodeId>& vectors);

  /// -log(max(dist[index], kLogFloor)); clamp hits are counted.
  NodeId neg_log_pick(NodeId dist, std::size_t index);

  /// sum_i coeffs[i] * scalars[i] as a scalar node.
  NodeId linear_combination(const std::vector<NodeId>& scalars,
                            const std::vector<double>& coeffs);

  /// Sum of all entries of a parameter, as a scalar node.
  NodeId param_sum(Parameter& p);

  /// Escape hatch for custom differentiable ops (tests use this to
  /// inject deliberately wrong backward rules).
  NodeId custom(std::vector<double> value, std::function<void(Tape&)> backward);

  std::vector<double>& grad_mut(NodeId id) { return nodes_[id].grad; }

  /// Run the recorded closures in reverse from a scalar loss node.
  /// Throws std::logic_error without a recorded forward pass.
  void backward(NodeId loss);

 private:
  struct Node {
    std::vector<double> value;
    std::vector<double> grad;
    std::function<void(Tape&)> back;
  };

  NodeId push(std::vector<double> value, std::function<void(Tape&)> back);

  std::vector<Node> nodes_;
  bool recording_ = true;
  bool backward_done_ = false;
  std::size_t clamp_count_ = 0;
};

}  // namespace aglab::num
