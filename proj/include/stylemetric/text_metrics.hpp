#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace stylemetric {

using TokenList = std::vector<std::string>;

/// Sentence BLEU with uniform weights over n = 1..N, N = min(4, |candidate|),
/// brevity penalty and no smoothing.
double bleu4(const TokenList& candidate, const TokenList& reference);
double bleu4(std::string_view candidate, std::string_view reference);

/// Rouge-N F1 over n-gram multisets.
double rouge_n(const TokenList& candidate, const TokenList& reference, int n);
double rouge_n(std::string_view candidate, std::string_view reference, int n);

}  // namespace stylemetric
