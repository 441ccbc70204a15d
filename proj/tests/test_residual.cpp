#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>
#include <set>

#include "json.hpp"
#include "stylemetric/random.hpp"
#include "stylemetric/residual.hpp"

using namespace stylemetric;

namespace {

const std::string kData = TEST_DATA_DIR;

AttributeSet set_of(std::initializer_list<Attribute> xs) {
  AttributeSet s;
  for (auto a : xs) s.insert(a);
  return s;
}

std::vector<std::size_t> identity_rank(std::size_t n) {
  std::vector<std::size_t> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = i;
  return r;
}

// O(n^2) enumeration straight from the definition.
std::vector<ResidualPair> brute_force(const std::vector<AttributeSet>& sets, const std::vector<std::size_t>& rank,
                                      int max_attrs) {
  std::vector<ResidualPair> out;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = 0; j < sets.size(); ++j) {
      if (sets[j].size() > max_attrs) continue;
      std::vector<Attribute> extra;
      bool subset = true;
      for (int k = 0; k < kAttributeCount; ++k) {
        const auto a = static_cast<Attribute>(k);
        if (sets[i].contains(a) && !sets[j].contains(a)) subset = false;
        if (sets[j].contains(a) && !sets[i].contains(a)) extra.push_back(a);
      }
      if (subset && extra.size() == 1) out.push_back({i, j, extra[0]});
    }
  }
  std::sort(out.begin(), out.end(), [&](const ResidualPair& a, const ResidualPair& b) {
    return std::pair(rank[a.first], rank[a.second]) < std::pair(rank[b.first], rank[b.second]);
  });
  return out;
}

std::vector<AttributeSet> random_sets(Rng& rng, std::size_t n, int universe, double p) {
  std::vector<AttributeSet> out;
  for (std::size_t i = 0; i < n; ++i) {
    AttributeSet s;
    for (int k = 0; k < universe; ++k) {
      if (rng.uniform() < p) s.insert(static_cast<Attribute>(k));
    }
    out.push_back(s);
  }
  return out;
}

// Test-side parser for the rendered attribute lists.
AttributeSet parse_list(const std::string& prompt, const std::string& label) {
  const auto at = prompt.rfind(label + ": [");
  REQUIRE(at != std::string::npos);
  const auto open = at + label.size() + 2;
  const auto close = prompt.find(']', open);
  REQUIRE(close != std::string::npos);
  const std::string body = prompt.substr(open + 1, close - open - 1);
  AttributeSet s;
  std::size_t pos = 0;
  while (pos < body.size()) {
    auto comma = body.find(", ", pos);
    if (comma == std::string::npos) comma = body.size();
    const auto a = attribute_from_name(body.substr(pos, comma - pos));
    REQUIRE(a.has_value());
    s.insert(*a);
    pos = comma + 2;
  }
  return s;
}

// Extracts the fenced block following a slot label.
std::string fenced_after(const std::string& prompt, const std::string& label) {
  const auto at = prompt.find(label + ":\n```java\n");
  REQUIRE(at != std::string::npos);
  const auto start = at + label.size() + 10;
  const auto end = prompt.find("\n```\n", start);
  REQUIRE(end != std::string::npos);
  return prompt.substr(start, end - start + 1);
}

}  // namespace

TEST_CASE("find_residual_pairs hand cases") {
  const auto a = Attribute::UpperEll, b = Attribute::TypeName, c = Attribute::MethodName;
  {
    const std::vector<AttributeSet> sets{set_of({a}), set_of({a, b})};
    const auto p = find_residual_pairs(sets, identity_rank(2));
    REQUIRE(p.size() == 1);
    CHECK(p[0] == ResidualPair{0, 1, b});
  }
  {
    const std::vector<AttributeSet> sets{set_of({a}), set_of({b, c})};
    CHECK(find_residual_pairs(sets, identity_rank(2)).empty());
    CHECK(find_residual_pairs_serial(sets, identity_rank(2)).empty());
  }
  {
    // Empty A1 pairs with every singleton; equal sets never pair.
    const std::vector<AttributeSet> sets{set_of({}), set_of({a}), set_of({a}), set_of({})};
    const auto p = find_residual_pairs(sets, identity_rank(4));
    CHECK(p.size() == 4);
    for (const auto& x : p) CHECK(x.residual == a);
  }
  CHECK(find_residual_pairs({}, {}).empty());
}

TEST_CASE("max_attrs bounds the larger set") {
  std::vector<AttributeSet> sets{AttributeSet{0b11111}, AttributeSet{0b111111}, AttributeSet{0b1111}};
  const auto rank = identity_rank(3);
  CHECK(find_residual_pairs(sets, rank, 5).size() == 1);
  CHECK(find_residual_pairs(sets, rank, 6).size() == 2);
  CHECK(find_residual_pairs(sets, rank, 4).empty());
}

TEST_CASE("property: indexed search equals brute force and the serial reference") {
  Rng rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 30 + rng.below(40);
    const int universe = 3 + static_cast<int>(rng.below(5));
    auto sets = random_sets(rng, n, universe, 0.35);
    std::vector<std::size_t> rank = identity_rank(n);
    for (std::size_t k = n; k > 1; --k) std::swap(rank[k - 1], rank[rng.below(k)]);
    const int max_attrs = 2 + static_cast<int>(rng.below(4));
    const auto oracle = brute_force(sets, rank, max_attrs);
    CHECK(find_residual_pairs_serial(sets, rank, max_attrs) == oracle);
    for (int jobs : {1, 4}) CHECK(find_residual_pairs(sets, rank, max_attrs, jobs) == oracle);
  }
}

TEST_CASE("key_rank orders by user then problem") {
  Corpus c;
  c.add({"u2", "p1", "q", ""});
  c.add({"u1", "p2", "q", ""});
  c.add({"u1", "p1", "q", ""});
  CHECK(key_rank(c) == std::vector<std::size_t>{2, 1, 0});
}

TEST_CASE("rendered prompt and target follow the templates") {
  const auto cat = AttributeCatalog::builtin();
  const UserRecord r1{"u1", "p1", "q", "class A {}\n"};
  const UserRecord r2{"u2", "p1", "q", "class a {}"};
  const auto a1 = set_of({Attribute::UpperEll});
  const auto a2 = set_of({Attribute::UpperEll, Attribute::TypeName});
  const auto rec = render_record(r1, a1, r2, a2, Attribute::TypeName, cat);
  CHECK(rec.prompt ==
        "You are given two pieces of code, <c1> and <c2>, along with their corresponding lists of style conventions, "
        "A_c1 and A_c2. Please identify and explain the style conventions in A_c2 that are not present in A_c1.\n\n"
        "<c1>:\n```java\nclass A {}\n```\n<c2>:\n```java\nclass a {}\n```\n"
        "A_c1: [UpperEll]\nA_c2: [UpperEll, TypeName]");
  CHECK(rec.target == "TypeName is present in A_c2 but not in A_c1; the style convention of TypeName indicates " +
                          cat.at(Attribute::TypeName).explanation + ".");
  CHECK(rec.source_ids[0].user_id == "u1");
  CHECK(rec.source_ids[1].user_id == "u2");

  const auto ell = render_record(r1, {}, r2, set_of({Attribute::UpperEll}), Attribute::UpperEll, cat);
  CHECK(ell.target.find("UpperEll is present in") == 0);
  CHECK(ell.target.find(cat.at(Attribute::UpperEll).explanation) != std::string::npos);
  CHECK(ell.prompt.find("A_c1: []\n") != std::string::npos);
}

TEST_CASE("render_record rejects invalid pairs and missing catalog entries") {
  const auto cat = AttributeCatalog::builtin();
  const UserRecord r{"u", "p", "q", "class A {}"};
  const auto a = set_of({Attribute::UpperEll});
  const auto ab = set_of({Attribute::UpperEll, Attribute::TypeName});
  CHECK_THROWS_AS(render_record(r, a, r, ab, Attribute::UpperEll, cat), std::invalid_argument);
  CHECK_THROWS_AS(render_record(r, {}, r, ab, Attribute::TypeName, cat), std::invalid_argument);
  CHECK_THROWS_AS(render_record(r, ab, r, a, Attribute::TypeName, cat), std::invalid_argument);
  AttributeCatalog partial;
  partial.set(Attribute::UpperEll, {"UpperEll", "x"});
  CHECK_THROWS_AS(render_record(r, a, r, ab, Attribute::TypeName, partial), std::out_of_range);
}

TEST_CASE("builtin catalog covers every attribute") {
  const auto cat = AttributeCatalog::builtin();
  for (int k = 0; k < kAttributeCount; ++k) {
    const auto a = static_cast<Attribute>(k);
    REQUIRE(cat.contains(a));
    CHECK(cat.at(a).display_name == name(a));
    CHECK_FALSE(cat.at(a).explanation.empty());
  }
}

TEST_CASE("render_no_residual") {
  const auto cat = AttributeCatalog::builtin();
  const auto pt = render_no_residual("class A { long x = 1l; }", set_of({Attribute::UpperEll}), cat);
  CHECK(pt.prompt ==
        "You are given one piece of code <c> along with their corresponding style convention <A_u>. Please identify "
        "and explain the style convention.\n\n<c>:\n```java\nclass A { long x = 1l; }\n```\nA_u: [UpperEll]");
  CHECK(pt.target == "UpperEll is present in code; the style convention of UpperEll indicates " +
                         cat.at(Attribute::UpperEll).explanation + ".");
  CHECK(parse_list(pt.prompt, "A_u") == set_of({Attribute::UpperEll}));
  CHECK_THROWS_AS(render_no_residual("", set_of({Attribute::UpperEll, Attribute::TypeName}), cat),
                  std::invalid_argument);
  CHECK_THROWS_AS(render_no_residual("", {}, cat), std::invalid_argument);
}

TEST_CASE("balance_indices caps each residual") {
  std::vector<Attribute> r(700, Attribute::UpperEll);
  r.insert(r.end(), 10, Attribute::TypeName);
  const auto keep = balance_indices(r, 600, 1);
  CHECK(keep.size() == 610);
  CHECK(std::is_sorted(keep.begin(), keep.end()));
  CHECK(std::count_if(keep.begin(), keep.end(), [](std::size_t i) { return i >= 700; }) == 10);
  CHECK(balance_indices(r, 600, 1) == keep);
  CHECK(balance_indices(r, 600, 2) != keep);
  CHECK(balance_indices(r, 1000, 1).size() == 710);
  CHECK_THROWS_AS(balance_indices(r, 0, 1), std::invalid_argument);
}

TEST_CASE("property: balance sampling is close to uniform") {
  std::vector<Attribute> r(10, Attribute::UpperEll);
  std::vector<int> hits(10, 0);
  for (std::uint64_t seed = 0; seed < 4000; ++seed) {
    for (const auto i : balance_indices(r, 3, seed)) ++hits[i];
  }
  // Expected 1200 per slot; binomial sd is about 29.
  for (int h : hits) CHECK(std::abs(h - 1200) < 150);
}

TEST_CASE("build_dataset on the synthetic corpus") {
  const auto corpus = load_corpus(kData + "/synthetic_corpus.jsonl");
  const auto cat = AttributeCatalog::builtin();
  DatasetOptions opts;
  opts.seed = 5;
  const auto ds = build_dataset(corpus, cat, opts);
  CHECK(ds.unparseable_skipped == 0);
  CHECK(ds.pairs_found > 0);
  CHECK(ds.records.size() == ds.pairs_found);

  std::map<std::pair<std::string, std::string>, std::string> code;
  for (const auto& r : corpus.records()) code[{r.user_id, r.problem_id}] = r.code;
  for (const auto& rec : ds.records) {
    REQUIRE(rec.attrs_1.subset_of(rec.attrs_2));
    REQUIRE(rec.attrs_2.size() - rec.attrs_1.size() == 1);
    REQUIRE(rec.attrs_2.contains(rec.residual));
    REQUIRE(rec.attrs_2.size() <= 5);
    CHECK(parse_list(rec.prompt, "A_c1") == rec.attrs_1);
    CHECK(parse_list(rec.prompt, "A_c2") == rec.attrs_2);
    CHECK(fenced_after(rec.prompt, "<c1>") == rec.code_1);
    CHECK(rec.code_1 == code.at({rec.source_ids[0].user_id, rec.source_ids[0].problem_id}));
    CHECK(rec.code_2 == code.at({rec.source_ids[1].user_id, rec.source_ids[1].problem_id}));
  }

  opts.cap = 3;
  const auto capped = build_dataset(corpus, cat, opts);
  std::map<Attribute, int> hist;
  for (const auto& rec : capped.records) ++hist[rec.residual];
  for (const auto& [_, n] : hist) CHECK(n <= 3);
  CHECK(to_jsonl(capped.records) == to_jsonl(build_dataset(corpus, cat, opts).records));
  opts.jobs = 1;
  CHECK(to_jsonl(capped.records) == to_jsonl(build_dataset(corpus, cat, opts).records));
}

TEST_CASE("to_jsonl fields") {
  const auto cat = AttributeCatalog::builtin();
  const UserRecord r{"u", "p", "q", "class A {}\n"};
  const auto rec = render_record(r, {}, r, set_of({Attribute::UpperEll}), Attribute::UpperEll, cat);
  const auto out = to_jsonl({rec, rec});
  CHECK(std::count(out.begin(), out.end(), '\n') == 2);
  const auto j = nlohmann::json::parse(out.substr(0, out.find('\n')));
  std::vector<std::string> keys;
  for (const auto& [k, _] : j.items()) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  CHECK(keys == std::vector<std::string>{"attrs_1", "attrs_2", "prompt", "residual_attribute", "source_ids", "target"});
  CHECK(j["residual_attribute"] == "UpperEll");
  CHECK(j["attrs_1"].empty());
  CHECK(j["source_ids"][0]["problem_id"] == "p");
  CHECK(to_jsonl({}).empty());
}
