#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "aglab/lookup.hpp"
#include "aglab/rng.hpp"

namespace aglab::task {

inline constexpr const char* kPadToken = "<pad>";
inline constexpr const char* kSosToken = "<sos>";
inline constexpr const char* kEosToken = "<eos>";

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& what)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + what) {}
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Token list with a fixed, documented index order.
struct Vocab {
  std::vector<std::string> tokens;
  std::unordered_map<std::string, std::size_t> index;

  static Vocab from_tokens(std::vector<std::string> tokens);

  /// Encoder side: binary strings in ascending order, then table tokens.
  static Vocab encoder(std::size_t string_length, std::size_t n_tables);

  /// Decoder side: <pad>, <sos>, binary strings ascending, <eos>.
  /// With length-3 strings this puts <sos> and the eight strings in
  /// 1-indexed rows 2..10 of the embedding.
  static Vocab decoder(std::size_t string_length);

  std::size_t size() const { return tokens.size(); }
  std::size_t id(const std::string& token) const;
  const std::string& token(std::size_t id) const { return tokens.at(id); }
  bool contains(const std::string& token) const { return index.count(token) > 0; }

  bool operator==(const Vocab& o) const { return tokens == o.tokens; }
};

/// One task instance. Targets start with a copy of the input string and
/// append one token per applied table, terminated by <eos>; the
/// attention target for decoder step t is input position t, with the
/// final <eos> step reusing the last input position.
struct Example {
  std::vector<std::string> input;
  std::vector<std::string> target;
  std::vector<std::size_t> attention;

  bool operator==(const Example&) const = default;
};

struct DatasetBundle {
  std::uint64_t seed = 0;
  std::size_t string_length = 3;
  std::vector<LookupTable> tables;
  Vocab enc_vocab;
  Vocab dec_vocab;

  std::vector<Example> train;
  std::vector<Example> heldout_inputs;
  std::vector<Example> heldout_compositions;
  std::vector<Example> heldout_tables;
  std::vector<Example> new_compositions;

  static const std::vector<std::string>& split_names();
  const std::vector<Example>& split(const std::string& name) const;
  std::vector<Example>& split(const std::string& name);

  /// All composition examples (train compositions plus every test
  /// split): the balanced activation-probe corpus.
  std::vector<Example> all_compositions() const;

  bool operator==(const DatasetBundle&) const = default;
};

/// Build one example by applying `applied` left to right to `input`.
Example make_example(const std::vector<const LookupTable*>& applied, const std::string& input);

/// The four-way evaluation protocol over 8 tables of length-3 strings:
/// new compositions = {t7,t8}x{t7,t8}; heldout tables = pairs containing
/// exactly one of t7/t8; 8 random heldout compositions from the 36 pairs
/// over t1..t6; 2 of 8 inputs held out per remaining training pair; all
/// atomic examples stay in train.
DatasetBundle build_splits(const std::vector<LookupTable>& tables, num::Rng& rng,
                           bool atomics_in_train = true);

/// generate_tables + build_splits from one seed, with fixed substreams,
/// so every entry point produces the identical bundle for a given seed.
DatasetBundle generate_dataset(std::uint64_t seed);

void write_dataset(const DatasetBundle& bundle, const std::filesystem::path& dir);
DatasetBundle read_dataset(const std::filesystem::path& dir);

}  // namespace aglab::task
