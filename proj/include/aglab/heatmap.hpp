#pragma once

#include <filesystem>
#include <string>

#include "aglab/matrix.hpp"

namespace aglab::analysis {

/// CSV grid of a weight matrix. Orientation (documented in the header
/// comment): row r = incoming weights of receiving unit r, column c =
/// outgoing weights of sending unit c.
void export_heatmap_csv(const num::Matrix& m, const std::string& name,
                        const std::filesystem::path& path);

/// Reads a heatmap CSV back (comment lines ignored).
num::Matrix read_heatmap_csv(const std::filesystem::path& path);

}  // namespace aglab::analysis
