#include "stylemetric/text_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "stylemetric/java_lex.hpp"

namespace stylemetric {

namespace {

using NGramCounts = std::map<std::vector<std::string_view>, int>;

NGramCounts ngrams(const TokenList& toks, std::size_t n) {
  NGramCounts out;
  if (toks.size() < n) return out;
  for (std::size_t i = 0; i + n <= toks.size(); ++i) {
    std::vector<std::string_view> g;
    g.reserve(n);
    for (std::size_t k = 0; k < n; ++k) g.emplace_back(toks[i + k]);
    ++out[std::move(g)];
  }
  return out;
}

int clipped_overlap(const NGramCounts& a, const NGramCounts& b) {
  int total = 0;
  for (const auto& [g, count] : a) {
    auto it = b.find(g);
    if (it != b.end()) total += std::min(count, it->second);
  }
  return total;
}

}  // namespace

double bleu4(const TokenList& candidate, const TokenList& reference) {
  if (candidate.empty() || reference.empty()) return 0.0;
  const std::size_t order = std::min<std::size_t>(4, candidate.size());
  double log_sum = 0;
  for (std::size_t n = 1; n <= order; ++n) {
    const auto c = ngrams(candidate, n);
    const auto r = ngrams(reference, n);
    const int matches = clipped_overlap(c, r);
    if (matches == 0) return 0.0;
    const double total = static_cast<double>(candidate.size() - n + 1);
    log_sum += std::log(matches / total) / static_cast<double>(order);
  }
  const double c = static_cast<double>(candidate.size());
  const double r = static_cast<double>(reference.size());
  const double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
  return std::min(1.0, bp * std::exp(log_sum));
}

double rouge_n(const TokenList& candidate, const TokenList& reference, int n) {
  if (n < 1) throw std::invalid_argument("rouge n must be positive");
  if (candidate.empty() || reference.empty()) return 0.0;
  const auto c = ngrams(candidate, static_cast<std::size_t>(n));
  const auto r = ngrams(reference, static_cast<std::size_t>(n));
  if (c.empty() && r.empty()) return candidate == reference ? 1.0 : 0.0;
  int c_total = 0;
  int r_total = 0;
  for (const auto& [g, k] : c) c_total += k;
  for (const auto& [g, k] : r) r_total += k;
  const int overlap = clipped_overlap(c, r);
  const double p = static_cast<double>(overlap) / std::max(c_total, 1);
  const double rec = static_cast<double>(overlap) / std::max(r_total, 1);
  return p + rec > 0 ? 2 * p * rec / (p + rec) : 0.0;
}

double bleu4(std::string_view candidate, std::string_view reference) {
  return bleu4(java::code_token_texts(candidate), java::code_token_texts(reference));
}

double rouge_n(std::string_view candidate, std::string_view reference, int n) {
  return rouge_n(java::code_token_texts(candidate), java::code_token_texts(reference), n);
}

}  // namespace stylemetric
