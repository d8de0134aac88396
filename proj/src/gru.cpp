#include "aglab/gru.hpp"

namespace aglab::seq2seq {

GruCell::GruCell(const std::string& prefix, std::size_t input_dim, std::size_t hidden)
    : W_iz(prefix + ".W_iz", hidden, input_dim),
      W_ir(prefix + ".W_ir", hidden, input_dim),
      W_ih(prefix + ".W_ih", hidden, input_dim),
      W_hz(prefix + ".W_hz", hidden, hidden),
      W_hr(prefix + ".W_hr", hidden, hidden),
      W_hh(prefix + ".W_hh", hidden, hidden),
      b_z(prefix + ".b_z", 1, hidden),
      b_r(prefix + ".b_r", 1, hidden),
      b_h(prefix + ".b_h", 1, hidden) {}

std::vector<num::Parameter*> GruCell::params() {
  return {&W_iz, &W_ir, &W_ih, &W_hz, &W_hr, &W_hh, &b_z, &b_r, &b_h};
}

GruStepNodes gru_step(num::Tape& tape, GruCell& cell, num::NodeId x, num::NodeId h_prev) {
  auto z = tape.sigmoid(
      tape.add_bias(tape.add(tape.matvec(cell.W_iz, x), tape.matvec(cell.W_hz, h_prev)),
                    cell.b_z));
  auto r = tape.sigmoid(
      tape.add_bias(tape.add(tape.matvec(cell.W_ir, x), tape.matvec(cell.W_hr, h_prev)),
                    cell.b_r));
  auto gated = tape.hadamard(r, h_prev);
  auto h_tilde = tape.tanh(
      tape.add_bias(tape.add(tape.matvec(cell.W_ih, x), tape.matvec(cell.W_hh, gated)),
                    cell.b_h));
  auto h = tape.blend(z, h_prev, h_tilde);
  return {h, z, r};
}

GruStepValues gru_step(GruCell& cell, const std::vector<double>& x,
                       const std::vector<double>& h_prev) {
  num::Tape tape(/*recording=*/false);
  auto xn = tape.input(x);
  auto hn = tape.input(h_prev);
  auto nodes = gru_step(tape, cell, xn, hn);
  return {tape.value(nodes.h), tape.value(nodes.z), tape.value(nodes.r)};
}

}  // namespace aglab::seq2seq
