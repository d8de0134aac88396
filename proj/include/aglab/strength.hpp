#pragma once

#include <vector>

#include "aglab/model.hpp"
#include "aglab/trace.hpp"

namespace aglab::analysis {

/// Connectivity score per hidden unit: mean |w| over every weight
/// incident to the unit — its incoming rows in the six GRU matrices,
/// its outgoing columns in the recurrent matrices, and its columns in
/// the attention scorer and the combine layer. Biases and embeddings
/// are not part of the score.
std::vector<double> neuron_strength(const seq2seq::Seq2SeqModel& model, Half half);

/// Indices of the strongest ceil(frac * n) units, strongest first.
std::vector<std::size_t> top_fraction(const std::vector<double>& strength, double frac);

}  // namespace aglab::analysis
