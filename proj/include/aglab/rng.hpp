#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace aglab::num {

std::uint64_t fnv1a64(std::string_view s);
std::uint64_t splitmix64(std::uint64_t x);

/// Seeded pseudo-random generator with platform-stable output.
///
/// The engine (std::mt19937_64) is bit-specified by the standard; all
/// value mappings (uniform doubles, bounded indices, shuffles) are done
/// here by hand so the draw sequence never depends on the standard
/// library's distribution implementations. No global state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1): 53 mantissa bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Unbiased index in [0, n) by rejection.
  std::size_t index(std::size_t n);

  /// Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  /// k distinct indices from [0, n), in draw order.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

  /// Independent named substream derived from the original seed: the
  /// same (seed, name) always yields the same stream, regardless of how
  /// much has been drawn from the parent.
  Rng child(std::string_view name) const {
    return Rng(splitmix64(seed_ ^ fnv1a64(name)));
  }

 private:
  std::uint64_t seed_ = 0;
  std::mt19937_64 engine_;
};

}  // namespace aglab::num
