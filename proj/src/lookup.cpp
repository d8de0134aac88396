#include "aglab/lookup.hpp"

#include <algorithm>
#include <stdexcept>

namespace aglab::task {

std::vector<std::string> all_binary_strings(std::size_t length) {
  std::vector<std::string> out;
  out.reserve(std::size_t{1} << length);
  for (std::size_t v = 0; v < (std::size_t{1} << length); ++v) {
    std::string s(length, '0');
    for (std::size_t b = 0; b < length; ++b)
      if (v & (std::size_t{1} << (length - 1 - b))) s[b] = '1';
    out.push_back(std::move(s));
  }
  return out;
}

std::size_t binary_index(const std::string& s, std::size_t length) {
  if (s.size() != length)
    throw std::invalid_argument("binary string '" + s + "' does not have length " +
                                std::to_string(length));
  std::size_t v = 0;
  for (char c : s) {
    if (c != '0' && c != '1')
      throw std::invalid_argument("binary string '" + s + "' contains non-binary character");
    v = (v << 1) | static_cast<std::size_t>(c == '1');
  }
  return v;
}

const std::string& LookupTable::apply(const std::string& input) const {
  return outputs[binary_index(input, length)];
}

bool LookupTable::is_bijection() const {
  if (outputs.size() != (std::size_t{1} << length)) return false;
  std::vector<bool> seen(outputs.size(), false);
  for (const auto& o : outputs) {
    std::size_t idx;
    try {
      idx = binary_index(o, length);
    } catch (const std::invalid_argument&) {
      return false;
    }
    if (seen[idx]) return false;
    seen[idx] = true;
  }
  return true;
}

bool LookupTable::is_identity() const {
  const auto domain = all_binary_strings(length);
  return outputs == domain;
}

std::optional<int> table_token_index(const std::string& token) {
  if (token.size() < 2 || token[0] != 't') return std::nullopt;
  int v = 0;
  for (std::size_t i = 1; i < token.size(); ++i) {
    if (token[i] < '0' || token[i] > '9') return std::nullopt;
    v = v * 10 + (token[i] - '0');
  }
  if (v < 1) return std::nullopt;
  return v - 1;
}

std::vector<LookupTable> generate_tables(num::Rng& rng, std::size_t n, std::size_t length) {
  std::vector<LookupTable> tables;
  tables.reserve(n);
  const auto domain = all_binary_strings(length);
  while (tables.size() < n) {
    LookupTable t;
    t.id = static_cast<int>(tables.size()) + 1;
    t.length = length;
    t.outputs = domain;
    rng.shuffle(t.outputs);
    if (t.is_identity()) continue;
    bool dup = false;
    for (const auto& prev : tables)
      if (prev.outputs == t.outputs) {
        dup = true;
        break;
      }
    if (dup) continue;
    tables.push_back(std::move(t));
  }
  return tables;
}

std::string compose(const LookupTable& a, const LookupTable& b, const std::string& input) {
  return b.apply(a.apply(input));
}

}  // namespace aglab::task
