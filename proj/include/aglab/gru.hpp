#pragma once

#include <string>
#include <vector>

#include "aglab/param.hpp"
#include "aglab/tape.hpp"

namespace aglab::seq2seq {

/// One GRU cell. Weight matrices are stored receiving-major: row u holds
/// the incoming weights of hidden unit u.
struct GruCell {
  num::Parameter W_iz, W_ir, W_ih;  // [hidden x input_dim]
  num::Parameter W_hz, W_hr, W_hh;  // [hidden x hidden]
  num::Parameter b_z, b_r, b_h;     // [1 x hidden]

  GruCell() = default;
  GruCell(const std::string& prefix, std::size_t input_dim, std::size_t hidden);

  std::size_t hidden() const { return W_hz.value.rows(); }
  std::size_t input_dim() const { return W_iz.value.cols(); }

  std::vector<num::Parameter*> params();
};

struct GruStepNodes {
  num::NodeId h, z, r;
};

/// z = σ(W_iz x + W_hz h + b_z); r = σ(W_ir x + W_hr h + b_r);
/// h~ = tanh(W_ih x + W_hh (r∘h) + b_h); h' = (1-z)∘h + z∘h~.
GruStepNodes gru_step(num::Tape& tape, GruCell& cell, num::NodeId x, num::NodeId h_prev);

struct GruStepValues {
  std::vector<double> h, z, r;
};

/// Value-level convenience wrapper (no gradient recording).
GruStepValues gru_step(GruCell& cell, const std::vector<double>& x,
                       const std::vector<double>& h_prev);

}  // namespace aglab::seq2seq
