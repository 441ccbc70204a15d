#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "stylemetric/random.hpp"
#include "stylemetric/text_metrics.hpp"

using namespace stylemetric;

namespace {

TokenList words(const std::string& s) {
  TokenList out;
  std::istringstream in(s);
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::string read_file(const std::string& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("bleu hand values") {
  CHECK(bleu4(words("a b c d e"), words("a b c d e")) == 1.0);
  // Missing 4-gram match gives zero without smoothing.
  CHECK(bleu4(words("a b c d"), words("a b c e")) == 0.0);
  // p1 = 5/6, p2 = 3/5, p3 = 2/4, p4 = 1/3, same length.
  CHECK(bleu4(words("a b c d x e"), words("a b c d y e")) ==
        doctest::Approx(std::pow(5.0 / 6 * 3.0 / 5 * 2.0 / 4 * 1.0 / 3, 0.25)).epsilon(1e-12));
  // Two-token candidate uses orders 1..2 and the brevity penalty exp(1 - 3/2).
  CHECK(bleu4(words("a b"), words("a b c")) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
  CHECK(bleu4(words("a"), words("a")) == 1.0);
  // Longer candidate: no brevity penalty, clipped counts.
  CHECK(bleu4(words("a a a"), words("a")) == 0.0);
  CHECK(bleu4(words("the the"), words("the cat")) == 0.0);
}

TEST_CASE("bleu edge cases") {
  CHECK(bleu4(TokenList{}, words("a")) == 0.0);
  CHECK(bleu4(words("a"), TokenList{}) == 0.0);
  CHECK(bleu4("", "") == 0.0);
}

TEST_CASE("rouge hand values") {
  CHECK(rouge_n(words("a b c"), words("a b d"), 1) == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(rouge_n(words("a b c"), words("a b d"), 2) == doctest::Approx(0.5).epsilon(1e-12));
  // p = 2/2, r = 2/4.
  CHECK(rouge_n(words("a b"), words("a b c d"), 1) == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(rouge_n(words("a a b"), words("a b b"), 1) == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(rouge_n(words("x"), words("y"), 1) == 0.0);
  CHECK(rouge_n(words("x"), words("x"), 2) == 1.0);
  CHECK(rouge_n(words("x"), words("y"), 2) == 0.0);
  CHECK_THROWS_AS(rouge_n(words("a"), words("a"), 0), std::invalid_argument);
  CHECK(rouge_n(TokenList{}, words("a"), 1) == 0.0);
}

TEST_CASE("string overloads tokenize Java") {
  CHECK(bleu4("int a = 1;", "int  a=1 ;") == 1.0);
  CHECK(rouge_n("int a = 1; // note", "int a = 1;", 2) == 1.0);
  CHECK(rouge_n("int a = 1;", "int b = 1;", 1) == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("committed pairs match the reference scorers") {
  const std::string dir = std::string(TEST_DATA_DIR) + "/eval_pairs/";
  const auto golden = nlohmann::json::parse(read_file(std::string(TEST_DATA_DIR) + "/eval_golden.json"));
  REQUIRE(golden["pairs"].size() == 20);
  for (const auto& g : golden["pairs"]) {
    const std::string id = g["problem_id"];
    const std::string gen = read_file(dir + id + "_gen.java");
    const std::string ref = read_file(dir + id + "_ref.java");
    CHECK_MESSAGE(std::fabs(bleu4(gen, ref) - g["bleu4"].get<double>()) <= 1e-6, id);
    CHECK_MESSAGE(std::fabs(rouge_n(gen, ref, 1) - g["rouge1"].get<double>()) <= 1e-6, id);
    CHECK_MESSAGE(std::fabs(rouge_n(gen, ref, 2) - g["rouge2"].get<double>()) <= 1e-6, id);
  }
}

TEST_CASE("property: bounds, identity and rouge symmetry") {
  Rng rng(77);
  const char* vocab[] = {"a", "b", "c", "d", "(", ")", ";", "x"};
  for (int trial = 0; trial < 3000; ++trial) {
    TokenList c, r;
    const auto nc = 1 + rng.below(12), nr = 1 + rng.below(12);
    for (std::uint64_t i = 0; i < nc; ++i) c.emplace_back(vocab[rng.below(8)]);
    for (std::uint64_t i = 0; i < nr; ++i) r.emplace_back(vocab[rng.below(8)]);
    const double b = bleu4(c, r);
    REQUIRE(b >= 0.0);
    REQUIRE(b <= 1.0);
    REQUIRE(bleu4(c, c) == 1.0);
    for (int n : {1, 2}) {
      const double f = rouge_n(c, r, n);
      REQUIRE(f >= 0.0);
      REQUIRE(f <= 1.0);
      REQUIRE(f == doctest::Approx(rouge_n(r, c, n)).epsilon(1e-12));
      REQUIRE(rouge_n(c, c, n) == 1.0);
    }
  }
}
