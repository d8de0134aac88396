#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include "aglab/dataset.hpp"
#include "aglab/io_util.hpp"
#include "aglab/lookup.hpp"

using namespace aglab;
using namespace aglab::task;

namespace {

// Fixture tables consistent with the published example rows:
// t1: 000->111, 001->010, 010->101 and the composed column
// (t1 then t2): 000->011, 001->110, 010->100.
LookupTable fixture_t1() {
  LookupTable t;
  t.id = 1;
  t.length = 3;
  t.outputs = {"111", "010", "101", "000", "001", "011", "100", "110"};
  return t;
}

LookupTable fixture_t2() {
  LookupTable t;
  t.id = 2;
  t.length = 3;
  t.outputs = {"101", "000", "110", "001", "010", "100", "111", "011"};
  return t;
}

LookupTable identity_table(int id) {
  LookupTable t;
  t.id = id;
  t.length = 3;
  t.outputs = all_binary_strings(3);
  return t;
}

}  // namespace

TEST_CASE("fixture tables match the published example") {
  const auto t1 = fixture_t1();
  CHECK(t1.is_bijection());
  CHECK(t1.apply("000") == "111");
  CHECK(t1.apply("001") == "010");
  CHECK(t1.apply("010") == "101");

  const auto t2 = fixture_t2();
  CHECK(t2.is_bijection());

  CHECK(compose(t1, t2, "000") == "011");
  CHECK(compose(t1, t2, "001") == "110");  // t1(001)=010, t2(010)=110
  CHECK(compose(t1, t2, "010") == "100");
}

TEST_CASE("compose applies left to right and validates input") {
  const auto id = identity_table(1);
  for (const auto& s : all_binary_strings(3)) CHECK(compose(id, id, s) == s);
  CHECK_THROWS_AS(compose(fixture_t1(), fixture_t2(), "0a0"), std::invalid_argument);
  CHECK_THROWS_AS(compose(fixture_t1(), fixture_t2(), "0000"), std::invalid_argument);
}

TEST_CASE("generated tables are distinct non-identity bijections") {
  num::Rng rng(101);
  const auto tables = generate_tables(rng);
  CHECK(tables.size() == 8);
  const auto domain = all_binary_strings(3);
  std::set<std::vector<std::string>> seen;
  for (const auto& t : tables) {
    CHECK(t.is_bijection());
    CHECK_FALSE(t.is_identity());
    auto sorted = t.outputs;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == domain);  // multiset of outputs is the full domain
    seen.insert(t.outputs);
  }
  CHECK(seen.size() == 8);

  num::Rng again(101);
  CHECK(generate_tables(again) == tables);
}

TEST_CASE("example construction: copy step, applications, eos, diagonal attention") {
  const auto t1 = fixture_t1();
  const auto t2 = fixture_t2();
  const auto ex = make_example({&t1, &t2}, "001");
  CHECK(ex.input == std::vector<std::string>{"001", "t1", "t2"});
  CHECK(ex.target == std::vector<std::string>{"001", "010", "110", kEosToken});
  CHECK(ex.attention == std::vector<std::size_t>{0, 1, 2, 2});

  const auto atomic = make_example({&t1}, "000");
  CHECK(atomic.input == std::vector<std::string>{"000", "t1"});
  CHECK(atomic.target == std::vector<std::string>{"000", "111", kEosToken});
  CHECK(atomic.attention == std::vector<std::size_t>{0, 1, 1});
}

TEST_CASE("vocabulary index orders are fixed") {
  const auto enc = Vocab::encoder(3, 8);
  CHECK(enc.size() == 16);
  CHECK(enc.token(0) == "000");
  CHECK(enc.token(7) == "111");
  CHECK(enc.token(8) == "t1");
  CHECK(enc.token(15) == "t8");

  const auto dec = Vocab::decoder(3);
  CHECK(dec.size() == 11);
  CHECK(dec.token(0) == kPadToken);
  CHECK(dec.token(1) == kSosToken);  // 1-indexed row 2
  CHECK(dec.token(2) == "000");
  CHECK(dec.token(9) == "111");      // 1-indexed row 10
  CHECK(dec.token(10) == kEosToken);
  CHECK_THROWS_AS(dec.id("t1"), std::invalid_argument);
}

TEST_CASE("split construction: exact counts for many seeds") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto bundle = generate_dataset(seed);
    CHECK(bundle.train.size() == 232);
    CHECK(bundle.heldout_inputs.size() == 56);
    CHECK(bundle.heldout_compositions.size() == 64);
    CHECK(bundle.heldout_tables.size() == 192);
    CHECK(bundle.new_compositions.size() == 32);
  }
}

namespace {

std::pair<int, int> composition_pair(const Example& ex) {
  REQUIRE(ex.input.size() == 3);
  auto a = table_token_index(ex.input[1]);
  auto b = table_token_index(ex.input[2]);
  REQUIRE(a);
  REQUIRE(b);
  return {*a + 1, *b + 1};
}

}  // namespace

TEST_CASE("split membership: NC is {t7,t8}^2, HT has exactly one special table") {
  const auto bundle = generate_dataset(5);

  std::set<std::pair<int, int>> nc_pairs;
  for (const auto& ex : bundle.new_compositions) nc_pairs.insert(composition_pair(ex));
  CHECK(nc_pairs == std::set<std::pair<int, int>>{{7, 7}, {7, 8}, {8, 7}, {8, 8}});

  for (const auto& ex : bundle.heldout_tables) {
    const auto [a, b] = composition_pair(ex);
    const int specials = int(a >= 7) + int(b >= 7);
    CHECK(specials == 1);
  }
  for (const auto& ex : bundle.heldout_compositions) {
    const auto [a, b] = composition_pair(ex);
    CHECK(a <= 6);
    CHECK(b <= 6);
  }
}

TEST_CASE("splits are pairwise disjoint on (input sequence)") {
  const auto bundle = generate_dataset(9);
  auto keys = [](const std::vector<Example>& split) {
    std::set<std::vector<std::string>> out;
    for (const auto& ex : split) out.insert(ex.input);
    return out;
  };
  const auto train = keys(bundle.train);
  for (const auto* other : {&bundle.heldout_inputs, &bundle.heldout_compositions,
                            &bundle.heldout_tables, &bundle.new_compositions}) {
    for (const auto& ex : *other) CHECK(train.count(ex.input) == 0);
  }
  const auto hi = keys(bundle.heldout_inputs);
  for (const auto& ex : bundle.heldout_compositions) CHECK(hi.count(ex.input) == 0);
}

TEST_CASE("every target is recomputable from the atomic tables (brute-force oracle)") {
  const auto bundle = generate_dataset(31);
  for (const auto& name : DatasetBundle::split_names()) {
    for (const auto& ex : bundle.split(name)) {
      std::string value = ex.input[0];
      std::vector<std::string> expected{value};
      for (std::size_t i = 1; i < ex.input.size(); ++i) {
        const auto idx = table_token_index(ex.input[i]);
        REQUIRE(idx);
        value = bundle.tables[*idx].apply(value);
        expected.push_back(value);
      }
      expected.push_back(kEosToken);
      CHECK(ex.target == expected);
      // strictly monotonic diagonal alignment
      for (std::size_t t = 0; t < ex.attention.size(); ++t)
        CHECK(ex.attention[t] == std::min(t, ex.input.size() - 1));
    }
  }
}

TEST_CASE("dataset round trip is identity") {
  const auto bundle = generate_dataset(77);
  const auto dir = std::filesystem::temp_directory_path() / "aglab_test_dataset";
  std::filesystem::remove_all(dir);
  write_dataset(bundle, dir);
  const auto back = read_dataset(dir);
  CHECK(back == bundle);

  // byte-identical rewrite
  write_dataset(back, dir);
  const auto again = read_dataset(dir);
  CHECK(again == bundle);
  std::filesystem::remove_all(dir);
}

TEST_CASE("parse errors carry file and line information") {
  const auto dir = std::filesystem::temp_directory_path() / "aglab_test_dataset_bad";
  std::filesystem::remove_all(dir);
  const auto bundle = generate_dataset(3);
  write_dataset(bundle, dir);

  SUBCASE("unknown token is named") {
    auto content = read_file(dir / "train.tsv");
    const auto pos = content.find("t1");
    content.replace(pos, 2, "tX");
    write_file_atomic(dir / "train.tsv", content);
    CHECK_THROWS_WITH_AS(read_dataset(dir), doctest::Contains("tX"), ParseError);
  }

  SUBCASE("truncated file is rejected with a line number") {
    auto content = read_file(dir / "new_compositions.tsv");
    content.resize(content.size() / 2);
    write_file_atomic(dir / "new_compositions.tsv", content);
    CHECK_THROWS_AS(read_dataset(dir), ParseError);
  }

  std::filesystem::remove_all(dir);
}
