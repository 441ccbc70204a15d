#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "stylemetric/css_metric.hpp"

namespace stylemetric {

struct UserRecord {
  std::string user_id;
  std::string problem_id;
  std::string question;
  std::string code;
};

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<UserRecord> records);

  /// Appends unless (user_id, problem_id) is already present; returns
  /// whether the record was added.
  bool add(UserRecord r);

  const std::vector<UserRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  const std::vector<std::size_t>& by_user(const std::string& user) const;
  const std::vector<std::size_t>& by_problem(const std::string& problem) const;
  const std::map<std::string, std::vector<std::size_t>>& users() const { return users_; }
  const std::map<std::string, std::vector<std::size_t>>& problems() const { return problems_; }

  int duplicates_dropped = 0;

 private:
  std::vector<UserRecord> records_;
  std::map<std::string, std::vector<std::size_t>> users_;
  std::map<std::string, std::vector<std::size_t>> problems_;
  std::map<std::pair<std::string, std::string>, std::size_t> keys_;
};

/// JSONL with keys user_id, problem_id, question, code. Duplicate
/// (user, problem) lines keep the first occurrence.
Corpus load_corpus(const std::string& path);
Corpus parse_corpus(const std::string& jsonl);
std::string corpus_to_jsonl(const Corpus& corpus);

/// Style reports for every record, in record order. OpenMP over records;
/// the serial version is the reference.
std::vector<CheckReport> check_records(const Corpus& corpus, int jobs = 0);
std::vector<CheckReport> check_records_serial(const Corpus& corpus);

/// Mean style vector over the user's parseable records.
StyleVector user_profile(const Corpus& corpus, const std::string& user_id);
StyleVector user_profile(const Corpus& corpus, const std::vector<CheckReport>& reports, const std::string& user_id);

struct Split {
  Corpus train;
  Corpus valid;
  Corpus test;
};

/// Problem counts per split by largest remainder; every split with a
/// positive ratio receives at least one problem.
std::array<std::size_t, 3> split_counts(std::size_t problems, const std::array<double, 3>& ratios);

/// Seeded shuffle of the sorted problem ids, then assignment by counts.
Split split_by_problem(const Corpus& corpus, const std::array<double, 3>& ratios, std::uint64_t seed);

struct CorpusStats {
  std::size_t records = 0;
  std::size_t users = 0;
  std::size_t problems = 0;
  double mean_records_per_user = 0;
  std::size_t min_records_per_user = 0;
  std::size_t max_records_per_user = 0;
  double mean_code_lines = 0;
  int duplicates_dropped = 0;
};

CorpusStats corpus_stats(const Corpus& corpus);

}  // namespace stylemetric
