#include "aglab/tape.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aglab/ops.hpp"

namespace aglab::num {

const std::vector<double>& Tape::grad(NodeId id) const {
  if (!recording_) throw std::logic_error("Tape::grad: tape is not recording");
  return nodes_[id].grad;
}

void Tape::reset() {
  nodes_.clear();
  backward_done_ = false;
  clamp_count_ = 0;
}

NodeId Tape::push(std::vector<double> value, std::function<void(Tape&)> back) {
  Node n;
  n.value = std::move(value);
  if (recording_) {
    n.grad.assign(n.value.size(), 0.0);
    n.back = std::move(back);
  }
  nodes_.push_back(std::move(n));
  return nodes_.size() - 1;
}

NodeId Tape::input(std::vector<double> v) { return push(std::move(v), nullptr); }

NodeId Tape::embed(Parameter& table, std::size_t row) {
  if (row >= table.value.rows()) throw std::logic_error("Tape::embed: row out of range");
  std::vector<double> v(table.value.row(row), table.value.row(row) + table.value.cols());
  Parameter* p = &table;
  NodeId out = push(std::move(v), nullptr);
  if (recording_)
    nodes_[out].back = [out, p, row](Tape& t) {
      if (p->frozen) return;
      const auto& g = t.nodes_[out].grad;
      double* dst = p->grad.row(row);
      for (std::size_t i = 0; i < g.size(); ++i) dst[i] += g[i];
    };
  return out;
}

NodeId Tape::matvec(Parameter& w, NodeId x) {
  const auto& xv = nodes_[x].value;
  if (w.value.cols() != xv.size())
    throw ShapeError("matvec: " + w.value.shape_str() + " x vector[" +
                     std::to_string(xv.size()) + "]");
  std::vector<double> y(w.value.rows());
  gemv(w.value, xv.data(), y.data());
  Parameter* p = &w;
  NodeId out = push(std::move(y), nullptr);
  if (recording_)
    nodes_[out].back = [out, p, x](Tape& t) {
      const auto& g = t.nodes_[out].grad;
      if (!p->frozen) ger_acc(p->grad, g.data(), t.nodes_[x].value.data());
      gemv_t_acc(p->value, g.data(), t.nodes_[x].grad.data());
    };
  return out;
}

NodeId Tape::matvec_cols(Parameter& w, NodeId x, std::size_t col0) {
  const auto& xv = nodes_[x].value;
  if (col0 + xv.size() > w.value.cols())
    throw ShapeError("matvec_cols: slice [" + std::to_string(col0) + ", " +
                     std::to_string(col0 + xv.size()) + ") exceeds " + w.value.shape_str());
  std::vector<double> y(w.value.rows(), 0.0);
  gemv_cols_acc(w.value, col0, xv.size(), xv.data(), y.data());
  Parameter* p = &w;
  const std::size_t n = xv.size();
  NodeId out = push(std::move(y), nullptr);
  if (recording_)
    nodes_[out].back = [out, p, x, col0, n](Tape& t) {
      const auto& g = t.nodes_[out].grad;
      if (!p->frozen) ger_cols_acc(p->grad, col0, n, g.data(), t.nodes_[x].value.data());
      gemv_t_cols_acc(p->value, col0, n, g.data(), t.nodes_[x].grad.data());
    };
  return out;
}

NodeId Tape::add(NodeId a, NodeId b) {
  const auto& av = nodes_[a].value;
  const auto& bv = nodes_[b].value;
  if (av.size() != bv.size()) throw ShapeError("add: length mismatch");
  std::vector<double> y(av.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = av[i] + bv[i];
  NodeId out = push(std::move(y), nullptr);
  if (recording_)
    nodes_[out].back = [out, a, b](Tape& t) {
      const auto& g = t.nodes_[out].grad;
      auto& ga = t.nodes_[a].grad;
      auto& gb = t.nodes_[b].grad;
      for (std::size_t i = 0; i < g.size(); ++i) {
        ga[i] += g[i];
        gb[i] += g[i];
      }
    };
  return out;
}

NodeId Tape::add_bias(NodeId x, Parameter& bias) {
  const auto& xv = nodes_[x].value;
  if (bias.value.size() != xv.size()) throw ShapeError("add_bias: length mismatch");
  std::vector<double> y(xv.size());
  const double* b = bias.value.data();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = xv[i] + b[i];
  Parameter* p = &bias;
  NodeId out = push(std::move(y), nullptr);
  if (recording_)
    nodes_[out].back = [out, x, p](Tape& t) {
      const auto& g = t.nodes_[out].grad;
      auto& gx = t.nodes_[x].grad;
      for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i];
      if (!p->frozen) {
        double* gb = p->grad.data();
        for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i];
      }
    };
  return out;
}

NodeId Tape::sigmoid(NodeId x) {
  std::vector<double> y = nodes_[x].value;
  sigmoid_inplace(y);
  NodeId out = push(std::move(y), nullptr);
  if (recording_)
    nodes_[out].back = [out, x](Tape& t) {
      const auto& g = t.nodes_[out].grad;
      const auto& y2 = t.nodes_[out].value;
      auto& gx = t.nodes_[x].grad;
      for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * y2[i] * (1.0 - y2[i]);
    };
  return out;
}

NodeId Tape::tanh(NodeId x) {
  std::vector<double> y = nodes_[x].value;
  tanh_inplace(y);
  NodeId out = push(std::move(y), nullptr);
  if (recording_)
    nodes_[out].back = [out, x](Tape& t) {
      const auto& g = t.nodes_[out].grad;
      const auto& y2 = t.nodes_[out].value;
      auto& gx = t.nodes_[x].grad;
      for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * (1.0 - y2[i] * y2[i]);
    };
  return out;
}

NodeId Tape::hadamard(NodeId a, NodeId b) {
  const auto& av = nodes_[a].value;
  const auto& bv = nodes_[b].value;
  if (av.size() != bv.size()) throw ShapeError("hadamard: length mismatch");
  std::vector<double> y(av.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = av[i] * bv[i];
  NodeId out = push(std::move(y), nullptr);
  if (recording_)
    nodes_[out].back = [out, a, b](Tape& t) {
      const auto& g = t.nodes_[out].grad;
      const auto& av2 = t.nodes_[a].value;
      const auto& bv2 = t.nodes_[b].value;
      auto& ga = t.nodes_[a].grad;
      auto& gb = t.nodes_[b].grad;
      for (std::size_t i = 0; i < g.size(); ++i) {
        ga[i] += g[i] * bv2[i];
        gb[i] += g[i] * av2[i];
      }
    };
  return out;
}

NodeId Tape::blend(NodeId z, NodeId h_prev, NodeId h_tilde) {
  const auto& zv = nodes_[z].value;
  const auto& hp = nodes_[h_prev].value;
  const auto& ht = nodes_[h_tilde].value;
  if (zv.size() != hp.size() || zv.size() != ht.size())
    throw ShapeError("blend: length mismatch");
  std::vector<double> y(zv.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    y[i] = (1.0 - zv[i]) * hp[i] + zv[i] * ht[i];
  NodeId out = push(std::move(y), nullptr);
  if (recording_)
    nodes_[out].back = [out, z, h_prev, h_tilde](Tape& t) {
      const auto& g = t.nodes_[out].grad;
      const auto& zv2 = t.nodes_[z].value;
      const auto& hp2 = t.nodes_[h_prev].value;
      const auto& ht2 = t.nodes_[h_tilde].value;
      auto& gz = t.nodes_[z].grad;
      auto& gp = t.nodes_[h_prev].grad;
      auto& gt = t.nodes_[h_tilde].grad;
      for (std::size_t i = 0; i < g.size(); ++i) {
        gz[i] += g[i] * (ht2[i] - hp2[i]);
        gp[i] += g[i] * (1.0 - zv2[i]);
        gt[i] += g[i] * zv2[i];
      }
    };
  return out;
}

NodeId Tape::gather(const std::vector<NodeId>& scalars) {
  std::vector<double> y(scalars.size());
  for (std::size_t i = 0; i < scalars.size(); ++i) {
    if (nodes_[scalars[i]].value.size() != 1)
      throw ShapeError("gather: inputs must be scalars");
    y[i] = nodes_[scalars[i]].value[0];
  }
  NodeId out = push(std::move(y), nullptr);
  if (recording_) {
    std::vector<NodeId> srcs = scalars;
    nodes_[out].back = [out, srcs](Tape& t) {
      const auto& g = t.nodes_[out].grad;
      for (std::size_t i = 0; i < srcs.size(); ++i) t.nodes_[srcs[i]].grad[0] += g[i];
    };
  }
  return out;
}

NodeId Tape::softmax(NodeId scores) {
  std::vector<double> y = nodes_[scores].value;
  softmax_inplace(y);
  NodeId out = push(std::move(y), nullptr);
  if (recording_)
    nodes_[out].back = [out, scores](Tape& t) {
      const auto& g = t.nodes_[out].grad;
      const auto& p = t.nodes_[out].value;
      auto& gs = t.nodes_[scores].grad;
      double dotgp = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) dotgp += g[i] * p[i];
      for (std::size_t i = 0; i < g.size(); ++i) gs[i] += p[i] * (g[i] - dotgp);
    };
  return out;
}

NodeId Tape::weighted_sum(NodeId weights, const std::vector<NodeId>& vectors) {
  const auto& wv = nodes_[weights].value;
  if (wv.size() != vectors.size())
    throw ShapeError("weighted_sum: weight count != vector count");
  if (vectors.empty()) throw ShapeError("weighted_sum: no vectors");
  const std::size_t dim = nodes_[vectors[0]].value.size();
  std::vector<double> y(dim, 0.0);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const auto& v = nodes_[vectors[i]].value;
    if (v.size() != dim) throw ShapeError("weighted_sum: inconsistent vector lengths");
    for (std::size_t k = 0; k < dim; ++k) y[k] += wv[i] * v[k];
  }
  NodeId out = push(std::move(y), nullptr);
  if (recording_) {
    std::vector<NodeId> srcs = vectors;
    nodes_[out].back = [out, weights, srcs](Tape& t) {
      const auto& g = t.nodes_[out].grad;
      const auto& wv2 = t.nodes_[weights].value;
      auto& gw = t.nodes_[weights].grad;
      for (std::size_t i = 0; i < srcs.size(); ++i) {
        const auto& v = t.nodes_[srcs[i]].value;
        auto& gv = t.nodes_[srcs[i]].grad;
        double acc = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) {
          acc += g[k] * v[k];
          gv[k] += g[k] * wv2[i];
        }
        gw[i] += acc;
      }
    };
  }
  return out;
}

NodeId Tape::neg_log_pick(NodeId dist, std::size_t index) {
  const auto& p = nodes_[dist].value;
  if (index >= p.size()) throw std::logic_error("neg_log_pick: index out of range");
  double q = p[index];
  bool clamped = false;
  if (q < kLogFloor) {
    q = kLogFloor;
    clamped = true;
    ++clamp_count_;
  }
  NodeId out = push({-std::log(q)}, nullptr);
  if (recording_)
    nodes_[out].back = [out, dist, index, clamped](Tape& t) {
      if (clamped) return;  // flat inside the floor
      const double g = t.nodes_[out].grad[0];
      t.nodes_[dist].grad[index] += -g / t.nodes_[dist].value[index];
    };
  return out;
}

NodeId Tape::linear_combination(const std::vector<NodeId>& scalars,
                                const std::vector<double>& coeffs) {
  if (scalars.size() != coeffs.size())
    throw ShapeError("linear_combination: count mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < scalars.size(); ++i) {
    if (nodes_[scalars[i]].value.size() != 1)
      throw ShapeError("linear_combination: inputs must be scalars");
    acc += coeffs[i] * nodes_[scalars[i]].value[0];
  }
  NodeId out = push({acc}, nullptr);
  if (recording_) {
    std::vector<NodeId> srcs = scalars;
    std::vector<double> cs = coeffs;
    nodes_[out].back = [out, srcs, cs](Tape& t) {
      const double g = t.nodes_[out].grad[0];
      for (std::size_t i = 0; i < srcs.size(); ++i) t.nodes_[srcs[i]].grad[0] += cs[i] * g;
    };
  }
  return out;
}

NodeId Tape::param_sum(Parameter& p) {
  double acc = 0.0;
  const double* d = p.value.data();
  for (std::size_t i = 0; i < p.value.size(); ++i) acc += d[i];
  Parameter* pp = &p;
  NodeId out = push({acc}, nullptr);
  if (recording_)
    nodes_[out].back = [out, pp](Tape& t) {
      if (pp->frozen) return;
      const double g = t.nodes_[out].grad[0];
      double* gd = pp->grad.data();
      for (std::size_t i = 0; i < pp->grad.size(); ++i) gd[i] += g;
    };
  return out;
}

NodeId Tape::custom(std::vector<double> value, std::function<void(Tape&)> backward) {
  return push(std::move(value), std::move(backward));
}

void Tape::backward(NodeId loss) {
  if (!recording_) throw std::logic_error("Tape::backward: tape is not recording");
  if (nodes_.empty()) throw std::logic_error("Tape::backward: no forward pass recorded");
  if (backward_done_) throw std::logic_error("Tape::backward: already run; reset() first");
  if (nodes_[loss].value.size() != 1)
    throw std::logic_error("Tape::backward: loss must be scalar");
  backward_done_ = true;
  nodes_[loss].grad[0] = 1.0;
  for (std::size_t i = nodes_.size(); i-- > 0;) {
    if (nodes_[i].back) nodes_[i].back(*this);
  }
}

}  // namespace aglab::num
