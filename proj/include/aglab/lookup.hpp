#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aglab/rng.hpp"

namespace aglab::task {

/// All binary strings of the given length in ascending order ("000",
/// "001", ..., "111").
std::vector<std::string> all_binary_strings(std::size_t length);

/// A bijective mapping over fixed-length binary strings. The domain is
/// the ascending string order; outputs[i] is the image of the i-th
/// string.
struct LookupTable {
  int id = 0;  // 1-based; token is "t<id>"
  std::size_t length = 3;
  std::vector<std::string> outputs;

  std::string token() const { return "t" + std::to_string(id); }
  const std::string& apply(const std::string& input) const;

  bool is_bijection() const;
  bool is_identity() const;

  bool operator==(const LookupTable&) const = default;
};

/// Index of a binary string within the ascending order; throws
/// std::invalid_argument on malformed input.
std::size_t binary_index(const std::string& s, std::size_t length);

/// Token "t3" -> table index 2; nullopt for non-table tokens.
std::optional<int> table_token_index(const std::string& token);

/// n distinct random bijections, none equal to the identity; duplicates
/// are rejection-resampled.
std::vector<LookupTable> generate_tables(num::Rng& rng, std::size_t n = 8,
                                         std::size_t length = 3);

/// Left-to-right application: returns b(a(input)).
std::string compose(const LookupTable& a, const LookupTable& b, const std::string& input);

}  // namespace aglab::task
