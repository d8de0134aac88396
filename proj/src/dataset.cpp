#include "aglab/dataset.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

#include "aglab/io_util.hpp"

namespace aglab::task {

using json = nlohmann::ordered_json;

Vocab Vocab::from_tokens(std::vector<std::string> tokens) {
  Vocab v;
  v.tokens = std::move(tokens);
  for (std::size_t i = 0; i < v.tokens.size(); ++i) v.index[v.tokens[i]] = i;
  if (v.index.size() != v.tokens.size())
    throw std::invalid_argument("Vocab: duplicate token in list");
  return v;
}

Vocab Vocab::encoder(std::size_t string_length, std::size_t n_tables) {
  std::vector<std::string> toks = all_binary_strings(string_length);
  for (std::size_t i = 1; i <= n_tables; ++i) toks.push_back("t" + std::to_string(i));
  return from_tokens(std::move(toks));
}

Vocab Vocab::decoder(std::size_t string_length) {
  std::vector<std::string> toks{kPadToken, kSosToken};
  for (auto& s : all_binary_strings(string_length)) toks.push_back(s);
  toks.push_back(kEosToken);
  return from_tokens(std::move(toks));
}

std::size_t Vocab::id(const std::string& token) const {
  auto it = index.find(token);
  if (it == index.end()) throw std::invalid_argument("unknown token '" + token + "'");
  return it->second;
}

const std::vector<std::string>& DatasetBundle::split_names() {
  static const std::vector<std::string> names{"train", "heldout_inputs", "heldout_compositions",
                                              "heldout_tables", "new_compositions"};
  return names;
}

const std::vector<Example>& DatasetBundle::split(const std::string& name) const {
  return const_cast<DatasetBundle*>(this)->split(name);
}

std::vector<Example>& DatasetBundle::split(const std::string& name) {
  if (name == "train") return train;
  if (name == "heldout_inputs") return heldout_inputs;
  if (name == "heldout_compositions") return heldout_compositions;
  if (name == "heldout_tables") return heldout_tables;
  if (name == "new_compositions") return new_compositions;
  throw std::invalid_argument("unknown split '" + name + "'");
}

std::vector<Example> DatasetBundle::all_compositions() const {
  std::vector<Example> out;
  for (const auto& ex : train)
    if (ex.input.size() == 3) out.push_back(ex);
  for (const auto* split : {&heldout_inputs, &heldout_compositions, &heldout_tables,
                            &new_compositions})
    out.insert(out.end(), split->begin(), split->end());
  return out;
}

Example make_example(const std::vector<const LookupTable*>& applied, const std::string& input) {
  Example ex;
  ex.input.push_back(input);
  for (const auto* t : applied) ex.input.push_back(t->token());

  std::string value = input;
  ex.target.push_back(value);  // copy step
  for (const auto* t : applied) {
    value = t->apply(value);
    ex.target.push_back(value);
  }
  ex.target.push_back(kEosToken);

  // strictly monotonic alignment; <eos> reuses the last input position
  for (std::size_t t = 0; t < ex.input.size(); ++t) ex.attention.push_back(t);
  ex.attention.push_back(ex.input.size() - 1);
  return ex;
}

DatasetBundle build_splits(const std::vector<LookupTable>& tables, num::Rng& rng,
                           bool atomics_in_train) {
  if (tables.size() != 8)
    throw std::invalid_argument("build_splits: expects exactly 8 tables, got " +
                                std::to_string(tables.size()));
  const std::size_t length = tables.front().length;
  for (const auto& t : tables)
    if (!t.is_bijection()) throw std::invalid_argument("build_splits: table " + t.token() +
                                                       " is not a bijection");

  DatasetBundle bundle;
  bundle.string_length = length;
  bundle.tables = tables;
  bundle.enc_vocab = Vocab::encoder(length, tables.size());
  bundle.dec_vocab = Vocab::decoder(length);

  const auto inputs = all_binary_strings(length);
  const auto special = [](int id) { return id == 7 || id == 8; };

  // Ordered pairs (a, b) partitioned by how many of {t7, t8} they contain.
  std::vector<std::pair<int, int>> nc_pairs, ht_pairs, regular_pairs;
  for (int a = 1; a <= 8; ++a)
    for (int b = 1; b <= 8; ++b) {
      const int specials = int(special(a)) + int(special(b));
      if (specials == 2)
        nc_pairs.emplace_back(a, b);
      else if (specials == 1)
        ht_pairs.emplace_back(a, b);
      else
        regular_pairs.emplace_back(a, b);
    }

  // 8 heldout compositions sampled from the 36 pairs over t1..t6.
  auto hc_choice = rng.sample_without_replacement(regular_pairs.size(), 8);
  std::vector<bool> is_hc(regular_pairs.size(), false);
  for (auto idx : hc_choice) is_hc[idx] = true;

  auto add_pair = [&](std::vector<Example>& dest, const std::pair<int, int>& pr,
                      const std::vector<std::string>& which) {
    const LookupTable& ta = tables[pr.first - 1];
    const LookupTable& tb = tables[pr.second - 1];
    for (const auto& in : which) dest.push_back(make_example({&ta, &tb}, in));
  };

  for (const auto& pr : nc_pairs) add_pair(bundle.new_compositions, pr, inputs);
  for (const auto& pr : ht_pairs) add_pair(bundle.heldout_tables, pr, inputs);
  for (std::size_t i = 0; i < regular_pairs.size(); ++i) {
    if (is_hc[i]) {
      add_pair(bundle.heldout_compositions, regular_pairs[i], inputs);
      continue;
    }
    // remove 2 of the inputs for every training composition
    auto heldout = rng.sample_without_replacement(inputs.size(), 2);
    std::vector<bool> held(inputs.size(), false);
    for (auto idx : heldout) held[idx] = true;
    std::vector<std::string> train_in, hi_in;
    for (std::size_t k = 0; k < inputs.size(); ++k)
      (held[k] ? hi_in : train_in).push_back(inputs[k]);
    add_pair(bundle.train, regular_pairs[i], train_in);
    add_pair(bundle.heldout_inputs, regular_pairs[i], hi_in);
  }

  if (atomics_in_train) {
    for (const auto& t : tables)
      for (const auto& in : inputs) bundle.train.push_back(make_example({&t}, in));
  }
  return bundle;
}

DatasetBundle generate_dataset(std::uint64_t seed) {
  num::Rng rng(seed);
  num::Rng table_rng = rng.child("tables");
  num::Rng split_rng = rng.child("splits");
  DatasetBundle bundle = build_splits(generate_tables(table_rng), split_rng);
  bundle.seed = seed;
  return bundle;
}

namespace {

std::string join(const std::vector<std::string>& toks) {
  std::string out;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (i) out += ' ';
    out += toks[i];
  }
  return out;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::string example_line(const Example& ex) {
  std::string line = join(ex.input);
  line += '\t';
  line += join(ex.target);
  line += '\t';
  for (std::size_t i = 0; i < ex.attention.size(); ++i) {
    if (i) line += ' ';
    line += std::to_string(ex.attention[i]);
  }
  return line;
}

Example parse_example_line(const std::string& file, std::size_t lineno, const std::string& line,
                           const Vocab& enc, const Vocab& dec) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab == std::string::npos ? tab : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  if (fields.size() != 3)
    throw ParseError(file, lineno,
                     "expected 3 tab-separated fields, got " + std::to_string(fields.size()));
  Example ex;
  ex.input = split_ws(fields[0]);
  ex.target = split_ws(fields[1]);
  if (ex.input.empty() || ex.target.empty())
    throw ParseError(file, lineno, "empty input or target field");
  for (const auto& tok : ex.input)
    if (!enc.contains(tok))
      throw ParseError(file, lineno, "unknown encoder token '" + tok + "'");
  for (const auto& tok : ex.target)
    if (!dec.contains(tok))
      throw ParseError(file, lineno, "unknown decoder token '" + tok + "'");
  for (const auto& tok : split_ws(fields[2])) {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(tok, &pos);
    } catch (const std::exception&) {
      throw ParseError(file, lineno, "bad attention index '" + tok + "'");
    }
    if (pos != tok.size()) throw ParseError(file, lineno, "bad attention index '" + tok + "'");
    if (v >= ex.input.size())
      throw ParseError(file, lineno, "attention index " + tok + " out of range");
    ex.attention.push_back(v);
  }
  if (ex.attention.size() != ex.target.size())
    throw ParseError(file, lineno, "attention target count != decoder step count");
  return ex;
}

}  // namespace

void write_dataset(const DatasetBundle& bundle, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  json header;
  header["format"] = "aglab-dataset";
  header["version"] = 1;
  header["seed"] = bundle.seed;
  header["string_length"] = bundle.string_length;
  json tables = json::object();
  for (const auto& t : bundle.tables) {
    json mapping = json::object();
    const auto domain = all_binary_strings(t.length);
    for (std::size_t i = 0; i < domain.size(); ++i) mapping[domain[i]] = t.outputs[i];
    tables[t.token()] = mapping;
  }
  header["tables"] = tables;
  header["encoder_vocab"] = bundle.enc_vocab.tokens;
  header["decoder_vocab"] = bundle.dec_vocab.tokens;
  json splits = json::object();
  for (const auto& name : DatasetBundle::split_names()) {
    splits[name] = {{"file", name + ".tsv"}, {"count", bundle.split(name).size()}};
  }
  header["splits"] = splits;
  write_file_atomic(dir / "header.json", header.dump(2) + "\n");

  for (const auto& name : DatasetBundle::split_names()) {
    std::string body;
    for (const auto& ex : bundle.split(name)) {
      body += example_line(ex);
      body += '\n';
    }
    write_file_atomic(dir / (name + ".tsv"), body);
  }
}

DatasetBundle read_dataset(const std::filesystem::path& dir) {
  const auto header_path = dir / "header.json";
  json header;
  try {
    header = json::parse(read_file(header_path));
  } catch (const json::parse_error& e) {
    throw ParseError(header_path.string() + ": " + e.what());
  }
  if (header.value("format", "") != "aglab-dataset")
    throw ParseError(header_path.string() + ": not an aglab dataset header");

  DatasetBundle bundle;
  bundle.seed = header.at("seed").get<std::uint64_t>();
  bundle.string_length = header.at("string_length").get<std::size_t>();
  bundle.enc_vocab = Vocab::from_tokens(header.at("encoder_vocab").get<std::vector<std::string>>());
  bundle.dec_vocab = Vocab::from_tokens(header.at("decoder_vocab").get<std::vector<std::string>>());

  const auto domain = all_binary_strings(bundle.string_length);
  for (auto& [token, mapping] : header.at("tables").items()) {
    auto idx = table_token_index(token);
    if (!idx) throw ParseError(header_path.string() + ": bad table token '" + token + "'");
    LookupTable t;
    t.id = *idx + 1;
    t.length = bundle.string_length;
    for (const auto& in : domain) t.outputs.push_back(mapping.at(in).get<std::string>());
    if (!t.is_bijection())
      throw ParseError(header_path.string() + ": table " + token + " is not a bijection");
    bundle.tables.push_back(std::move(t));
  }
  std::sort(bundle.tables.begin(), bundle.tables.end(),
            [](const LookupTable& a, const LookupTable& b) { return a.id < b.id; });

  for (const auto& name : DatasetBundle::split_names()) {
    const auto& meta = header.at("splits").at(name);
    const auto path = dir / meta.at("file").get<std::string>();
    const std::string content = read_file(path);
    auto& dest = bundle.split(name);
    std::size_t lineno = 0, start = 0;
    while (start < content.size()) {
      auto nl = content.find('\n', start);
      if (nl == std::string::npos)
        throw ParseError(path.string(), lineno + 1, "truncated file: missing final newline");
      ++lineno;
      const std::string line = content.substr(start, nl - start);
      if (!line.empty())
        dest.push_back(parse_example_line(path.string(), lineno, line, bundle.enc_vocab,
                                          bundle.dec_vocab));
      start = nl + 1;
    }
    const auto expected = meta.at("count").get<std::size_t>();
    if (dest.size() != expected)
      throw ParseError(path.string(), lineno,
                       "truncated file: header promises " + std::to_string(expected) +
                           " examples, found " + std::to_string(dest.size()));
  }
  return bundle;
}

}  // namespace aglab::task
