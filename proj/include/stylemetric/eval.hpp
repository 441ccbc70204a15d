#pragma once

#include <optional>
#include <string>
#include <vector>

namespace stylemetric {

struct EvalPair {
  std::string generated;
  std::string reference;
  std::string user_id;
  std::string problem_id;
};

struct EvalRow {
  std::string user_id;
  std::string problem_id;
  std::optional<double> css;  // empty when either side is unparseable
  double bleu4 = 0;
  double rouge1 = 0;
  double rouge2 = 0;
};

struct EvalReport {
  std::vector<EvalRow> rows;
  double mean_css = 0;  // over rows with a css value
  double mean_bleu4 = 0;
  double mean_rouge1 = 0;
  double mean_rouge2 = 0;
  std::size_t count = 0;
  std::size_t skipped_unparseable = 0;
};

EvalRow evaluate_pair(const EvalPair& pair);

/// Rows in input order. Throws std::invalid_argument on an empty list.
EvalReport evaluate_pairs(const std::vector<EvalPair>& pairs, int jobs = 0);
EvalReport evaluate_pairs_serial(const std::vector<EvalPair>& pairs);

/// Aggregates recomputed from rows.
void aggregate(EvalReport& report);

/// Manifest JSONL: generated_path, reference_path, user_id, problem_id.
/// Relative paths resolve against the manifest's directory.
std::vector<EvalPair> load_manifest(const std::string& path);

}  // namespace stylemetric
