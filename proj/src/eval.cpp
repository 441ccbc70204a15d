#include "stylemetric/eval.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "stylemetric/css_metric.hpp"
#include "stylemetric/java_lex.hpp"
#include "stylemetric/text_metrics.hpp"

namespace stylemetric {

namespace fs = std::filesystem;

EvalRow evaluate_pair(const EvalPair& pair) {
  EvalRow row;
  row.user_id = pair.user_id;
  row.problem_id = pair.problem_id;
  const auto gen = run_all(pair.generated);
  const auto ref = run_all(pair.reference);
  if (!gen.unparseable && !ref.unparseable) row.css = css(style_vector(gen), style_vector(ref));
  const auto ct = java::code_token_texts(pair.generated);
  const auto rt = java::code_token_texts(pair.reference);
  row.bleu4 = bleu4(ct, rt);
  row.rouge1 = rouge_n(ct, rt, 1);
  row.rouge2 = rouge_n(ct, rt, 2);
  return row;
}

void aggregate(EvalReport& report) {
  report.count = report.rows.size();
  report.skipped_unparseable = 0;
  double css_sum = 0;
  double b = 0;
  double r1 = 0;
  double r2 = 0;
  for (const auto& row : report.rows) {
    if (row.css) {
      css_sum += *row.css;
    } else {
      ++report.skipped_unparseable;
    }
    b += row.bleu4;
    r1 += row.rouge1;
    r2 += row.rouge2;
  }
  const auto n = static_cast<double>(report.count);
  const auto scored = static_cast<double>(report.count - report.skipped_unparseable);
  report.mean_css = scored > 0 ? css_sum / scored : 0;
  report.mean_bleu4 = n > 0 ? b / n : 0;
  report.mean_rouge1 = n > 0 ? r1 / n : 0;
  report.mean_rouge2 = n > 0 ? r2 / n : 0;
}

EvalReport evaluate_pairs_serial(const std::vector<EvalPair>& pairs) {
  if (pairs.empty()) throw std::invalid_argument("no pairs to evaluate");
  EvalReport report;
  for (const auto& p : pairs) report.rows.push_back(evaluate_pair(p));
  aggregate(report);
  return report;
}

EvalReport evaluate_pairs(const std::vector<EvalPair>& pairs, int jobs) {
  if (pairs.empty()) throw std::invalid_argument("no pairs to evaluate");
  EvalReport report;
  report.rows.resize(pairs.size());
  const auto n = static_cast<std::int64_t>(pairs.size());
  if (jobs <= 0) jobs = 1;
#pragma omp parallel for schedule(dynamic, 2) num_threads(jobs)
  for (std::int64_t i = 0; i < n; ++i) {
    report.rows[static_cast<std::size_t>(i)] = evaluate_pair(pairs[static_cast<std::size_t>(i)]);
  }
  aggregate(report);
  return report;
}

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + p.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

std::vector<EvalPair> load_manifest(const std::string& path) {
  const fs::path base = fs::path(path).parent_path();
  std::istringstream in(read_file(path));
  std::vector<EvalPair> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = "manifest line " + std::to_string(line_no);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      throw std::runtime_error(where + ": malformed JSON");
    }
    auto get = [&](const char* key) {
      if (!j.contains(key) || !j[key].is_string()) throw std::runtime_error(where + ": missing key \"" + key + "\"");
      return j[key].get<std::string>();
    };
    auto resolve = [&](const std::string& p) {
      const fs::path q(p);
      return q.is_absolute() ? q : base / q;
    };
    EvalPair pair;
    pair.generated = read_file(resolve(get("generated_path")));
    pair.reference = read_file(resolve(get("reference_path")));
    pair.user_id = get("user_id");
    pair.problem_id = get("problem_id");
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

}  // namespace stylemetric
