#include "stylemetric/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "stylemetric/random.hpp"

namespace stylemetric {

namespace {

const std::vector<std::size_t> kEmpty;

std::string required_string(const nlohmann::json& j, const char* key, std::size_t line) {
  const auto prefix = "line " + std::to_string(line) + ": ";
  auto it = j.find(key);
  if (it == j.end()) throw CorpusError(prefix + "missing key \"" + key + "\"");
  if (!it->is_string()) throw CorpusError(prefix + "key \"" + key + "\" is not a string");
  auto s = it->get<std::string>();
  if (s.empty() && std::string_view(key) != "question") {
    throw CorpusError(prefix + "key \"" + key + "\" is empty");
  }
  return s;
}

}  // namespace

Corpus::Corpus(std::vector<UserRecord> records) {
  for (auto& r : records) {
    if (!add(std::move(r))) ++duplicates_dropped;
  }
}

bool Corpus::add(UserRecord r) {
  auto [it, fresh] = keys_.try_emplace({r.user_id, r.problem_id}, records_.size());
  if (!fresh) return false;
  users_[r.user_id].push_back(records_.size());
  problems_[r.problem_id].push_back(records_.size());
  records_.push_back(std::move(r));
  return true;
}

const std::vector<std::size_t>& Corpus::by_user(const std::string& user) const {
  auto it = users_.find(user);
  return it == users_.end() ? kEmpty : it->second;
}

const std::vector<std::size_t>& Corpus::by_problem(const std::string& problem) const {
  auto it = problems_.find(problem);
  return it == problems_.end() ? kEmpty : it->second;
}

Corpus parse_corpus(const std::string& jsonl) {
  Corpus corpus;
  std::istringstream in(jsonl);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw CorpusError("line " + std::to_string(line_no) + ": malformed JSON (" + e.what() + ")");
    }
    if (!j.is_object()) throw CorpusError("line " + std::to_string(line_no) + ": record is not a JSON object");
    UserRecord r;
    r.user_id = required_string(j, "user_id", line_no);
    r.problem_id = required_string(j, "problem_id", line_no);
    r.question = required_string(j, "question", line_no);
    r.code = required_string(j, "code", line_no);
    if (!corpus.add(std::move(r))) ++corpus.duplicates_dropped;
  }
  return corpus;
}

Corpus load_corpus(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw CorpusError("cannot open corpus file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_corpus(ss.str());
}

std::string corpus_to_jsonl(const Corpus& corpus) {
  std::string out;
  for (const auto& r : corpus.records()) {
    nlohmann::ordered_json j;
    j["user_id"] = r.user_id;
    j["problem_id"] = r.problem_id;
    j["question"] = r.question;
    j["code"] = r.code;
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<CheckReport> check_records_serial(const Corpus& corpus) {
  std::vector<CheckReport> out;
  out.reserve(corpus.size());
  for (const auto& r : corpus.records()) out.push_back(run_all(r.code, r.user_id + "/" + r.problem_id));
  return out;
}

std::vector<CheckReport> check_records(const Corpus& corpus, int jobs) {
  const auto& recs = corpus.records();
  std::vector<CheckReport> out(recs.size());
  const auto n = static_cast<std::int64_t>(recs.size());
  if (jobs <= 0) jobs = 1;
#pragma omp parallel for schedule(dynamic, 4) num_threads(jobs)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto& r = recs[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] = run_all(r.code, r.user_id + "/" + r.problem_id);
  }
  return out;
}

StyleVector user_profile(const Corpus& corpus, const std::vector<CheckReport>& reports, const std::string& user_id) {
  const auto& idx = corpus.by_user(user_id);
  if (idx.empty()) throw CorpusError("unknown user " + user_id);
  StyleVector sum;
  int n = 0;
  for (const std::size_t i : idx) {
    if (reports[i].unparseable) continue;
    const StyleVector v = style_vector(reports[i]);
    for (std::size_t k = 0; k < sum.c.size(); ++k) sum.c[k] += v.c[k];
    ++n;
  }
  if (n == 0) throw CorpusError("user " + user_id + " has no parseable records");
  for (double& x : sum.c) x /= n;
  return sum;
}

StyleVector user_profile(const Corpus& corpus, const std::string& user_id) {
  const auto& idx = corpus.by_user(user_id);
  if (idx.empty()) throw CorpusError("unknown user " + user_id);
  std::vector<CheckReport> reports(corpus.size());
  for (const std::size_t i : idx) reports[i] = run_all(corpus.records()[i].code);
  return user_profile(corpus, reports, user_id);
}

std::array<std::size_t, 3> split_counts(std::size_t problems, const std::array<double, 3>& ratios) {
  double sum = 0;
  for (double r : ratios) {
    if (!(r > 0)) throw CorpusError("split ratios must be positive");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw CorpusError("split ratios must sum to 1");
  if (problems < ratios.size()) {
    throw CorpusError("cannot split " + std::to_string(problems) + " problems into 3 non-empty parts");
  }
  std::array<std::size_t, 3> counts{};
  std::array<double, 3> frac{};
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    const double exact = static_cast<double>(problems) * ratios[k];
    counts[k] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    frac[k] = exact - static_cast<double>(counts[k]);
    assigned += counts[k];
  }
  std::array<std::size_t, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  for (std::size_t k = 0; assigned < problems; k = (k + 1) % 3, ++assigned) ++counts[order[k]];
  for (std::size_t k = 0; k < 3; ++k) {
    if (counts[k] > 0) continue;
    const auto donor = static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
    --counts[donor];
    ++counts[k];
  }
  return counts;
}

Split split_by_problem(const Corpus& corpus, const std::array<double, 3>& ratios, std::uint64_t seed) {
  std::vector<std::string> ids;
  ids.reserve(corpus.problems().size());
  for (const auto& [id, _] : corpus.problems()) ids.push_back(id);
  const auto counts = split_counts(ids.size(), ratios);
  Rng rng(seed);
  rng.shuffle(ids);
  std::map<std::string, int> part;
  std::size_t k = 0;
  for (int s = 0; s < 3; ++s) {
    for (std::size_t c = 0; c < counts[static_cast<std::size_t>(s)]; ++c) part[ids[k++]] = s;
  }
  Split out;
  for (const auto& r : corpus.records()) {
    switch (part.at(r.problem_id)) {
      case 0: out.train.add(r); break;
      case 1: out.valid.add(r); break;
      default: out.test.add(r); break;
    }
  }
  return out;
}

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats s;
  s.records = corpus.size();
  s.users = corpus.users().size();
  s.problems = corpus.problems().size();
  s.duplicates_dropped = corpus.duplicates_dropped;
  if (s.users > 0) {
    s.min_records_per_user = SIZE_MAX;
    for (const auto& [_, idx] : corpus.users()) {
      s.min_records_per_user = std::min(s.min_records_per_user, idx.size());
      s.max_records_per_user = std::max(s.max_records_per_user, idx.size());
    }
    s.mean_records_per_user = static_cast<double>(s.records) / static_cast<double>(s.users);
  }
  if (s.records > 0) {
    double lines = 0;
    for (const auto& r : corpus.records()) lines += static_cast<double>(java::SourceLines(r.code).size());
    s.mean_code_lines = lines / static_cast<double>(s.records);
  }
  return s;
}

}  // namespace stylemetric
