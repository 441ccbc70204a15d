#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "stylemetric/corpus.hpp"
#include "stylemetric/style_checks.hpp"

namespace stylemetric {

struct CatalogEntry {
  std::string display_name;
  std::string explanation;
};

class AttributeCatalog {
 public:
  static AttributeCatalog builtin();

  void set(Attribute a, CatalogEntry e) { entries_[a] = std::move(e); }
  /// Throws std::out_of_range when the attribute has no entry.
  const CatalogEntry& at(Attribute a) const;
  bool contains(Attribute a) const { return entries_.count(a) != 0; }

 private:
  std::map<Attribute, CatalogEntry> entries_;
};

/// Ordered pair of record indices whose attribute sets differ by one.
struct ResidualPair {
  std::size_t first;   // record with A1
  std::size_t second;  // record with A2 = A1 + {residual}
  Attribute residual;
  bool operator==(const ResidualPair&) const = default;
};

/// All pairs (i, j) with sets[i] a subset of sets[j], |sets[j] \ sets[i]| = 1
/// and |sets[j]| <= max_attrs. `order` ranks records (ties broken by index);
/// output is sorted by (rank[first], rank[second]). Index-by-mask search,
/// OpenMP over target masks; the serial version is the reference.
std::vector<ResidualPair> find_residual_pairs(const std::vector<AttributeSet>& sets, const std::vector<std::size_t>& rank,
                                              int max_attrs = 5, int jobs = 0);
std::vector<ResidualPair> find_residual_pairs_serial(const std::vector<AttributeSet>& sets,
                                                     const std::vector<std::size_t>& rank, int max_attrs = 5);

/// Rank of each record when sorted by (user_id, problem_id).
std::vector<std::size_t> key_rank(const Corpus& corpus);

struct SourceId {
  std::string user_id;
  std::string problem_id;
};

struct ResidualRecord {
  std::string code_1;
  std::string code_2;
  AttributeSet attrs_1;
  AttributeSet attrs_2;
  Attribute residual;
  std::string prompt;
  std::string target;
  std::vector<SourceId> source_ids;
};

std::string render_residual_prompt(const std::string& code_1, const std::string& code_2, AttributeSet a1,
                                   AttributeSet a2, const AttributeCatalog& catalog);
std::string render_residual_target(Attribute residual, const AttributeCatalog& catalog);

/// Renders one pair. Throws std::invalid_argument unless attrs_1 is a subset
/// of attrs_2 differing exactly by `residual`.
ResidualRecord render_record(const UserRecord& r1, AttributeSet a1, const UserRecord& r2, AttributeSet a2,
                             Attribute residual, const AttributeCatalog& catalog);

struct PromptTarget {
  std::string prompt;
  std::string target;
};

/// Single-code template; throws std::invalid_argument unless |attrs| == 1.
PromptTarget render_no_residual(const std::string& code, AttributeSet attrs, const AttributeCatalog& catalog);

/// Keeps at most `cap` records per residual attribute, choosing the kept
/// surplus uniformly with a seeded sample; input order is preserved.
std::vector<ResidualRecord> balance(const std::vector<ResidualRecord>& records, int cap, std::uint64_t seed);
std::vector<std::size_t> balance_indices(const std::vector<Attribute>& residuals, int cap, std::uint64_t seed);

inline constexpr int kDefaultCap = 600;
inline constexpr int kDefaultEvalCap = 75;
inline constexpr int kDefaultMaxAttrs = 5;

struct DatasetOptions {
  int max_attrs = kDefaultMaxAttrs;
  int cap = kDefaultCap;
  std::uint64_t seed = 0;
  int jobs = 0;
};

struct Dataset {
  std::vector<ResidualRecord> records;  // balanced
  std::size_t pairs_found = 0;
  std::size_t unparseable_skipped = 0;
};

/// Checks every record, searches pairs, renders and balances.
Dataset build_dataset(const Corpus& corpus, const AttributeCatalog& catalog, const DatasetOptions& opts);

/// One JSON object per line: prompt, target, residual_attribute, attrs_1,
/// attrs_2, source_ids.
std::string to_jsonl(const std::vector<ResidualRecord>& records);

}  // namespace stylemetric
