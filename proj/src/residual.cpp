#include "stylemetric/residual.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "json.hpp"
#include "stylemetric/random.hpp"

namespace stylemetric {

namespace {

constexpr std::string_view kResidualInstruction =
    "You are given two pieces of code, <c1> and <c2>, along with their corresponding lists of style conventions, "
    "A_c1 and A_c2. Please identify and explain the style conventions in A_c2 that are not present in A_c1.";

constexpr std::string_view kSingleInstruction =
    "You are given one piece of code <c> along with their corresponding style convention <A_u>. Please identify and "
    "explain the style convention.";

struct BuiltinText {
  Attribute id;
  const char* explanation;
};

constexpr BuiltinText kExplanations[] = {
    {Attribute::NoLineWrap, "that a package or import statement is split across several lines instead of one"},
    {Attribute::AvoidStarImport, "that imports use the wildcard form such as java.util.* instead of naming each class"},
    {Attribute::OneTopLevelClass, "that one source file declares more than one top-level type"},
    {Attribute::EmptyLineSeparator,
     "that package, import, field, method, constructor or type sections follow each other without a blank line"},
    {Attribute::RightCurly,
     "that a closing brace is placed differently from the usual layout, either sharing a line with other code or "
     "separated from the else, catch, finally or while that continues the statement"},
    {Attribute::SeparatorWrap,
     "that a wrapped line breaks at a separator on the wrong side, leaving a dot at the end of a line or starting a "
     "line with a comma"},
    {Attribute::WhitespaceAround,
     "that operators, braces or keywords such as if, for and while are written without a surrounding space"},
    {Attribute::GenericWhitespace,
     "that the angle brackets of generic types carry extra or missing spaces, as in List <String>"},
    {Attribute::OperatorWrap, "that a wrapped expression breaks after a binary operator instead of before it"},
    {Attribute::LineLength, "that some lines are longer than 100 characters"},
    {Attribute::LeftCurly,
     "that an opening brace starts its own line, or that code follows an opening brace on the same line"},
    {Attribute::EmptyBlock, "that a try, finally, if, else or switch block is left completely empty"},
    {Attribute::NeedBraces, "that the body of an if, else, for, while or do statement is written without braces"},
    {Attribute::MultipleVariableDeclarations,
     "that several variables are declared in one statement or several declarations share a line"},
    {Attribute::OneStatementPerLine, "that more than one statement is written on the same line"},
    {Attribute::UpperEll, "that long literals end with a lowercase l, which is easy to confuse with the digit 1"},
    {Attribute::ModifierOrder,
     "that modifiers are not written in the conventional sequence public, protected, private, abstract, default, "
     "static, final, transient, volatile, synchronized, native, strictfp, or that annotations come after them"},
    {Attribute::FallThrough,
     "that a switch case runs into the next case without break, return, throw or continue and without a comment "
     "marking the fall through"},
    {Attribute::MissingSwitchDefault, "that a switch statement has no default branch"},
    {Attribute::TypeName, "that a class, interface or enum name does not use UpperCamelCase"},
    {Attribute::MethodName, "that a method name does not use lowerCamelCase"},
    {Attribute::MemberName, "that an instance field name does not use lowerCamelCase"},
    {Attribute::ParameterName, "that a method or constructor parameter name does not use lowerCamelCase"},
    {Attribute::LocalVariableName, "that a local variable name does not use lowerCamelCase"},
    {Attribute::Indentation,
     "that code is not indented by two spaces per block level, with four spaces for continuation lines"},
};

std::string name_list(AttributeSet s, const AttributeCatalog& catalog) {
  std::string out = "[";
  bool first = true;
  for (const Attribute a : s.members()) {
    if (!first) out += ", ";
    out += catalog.at(a).display_name;
    first = false;
  }
  return out + "]";
}

std::string fenced(std::string_view code) {
  std::string out = "```java\n";
  out += code;
  if (out.back() != '\n') out += '\n';
  return out + "```\n";
}

void validate_pair(AttributeSet a1, AttributeSet a2, Attribute residual) {
  AttributeSet expected = a1;
  expected.insert(residual);
  if (a1.contains(residual) || !(expected == a2)) {
    throw std::invalid_argument("attribute sets do not differ by exactly the residual attribute");
  }
}

}  // namespace

AttributeCatalog AttributeCatalog::builtin() {
  AttributeCatalog c;
  for (const auto& e : kExplanations) c.set(e.id, CatalogEntry{std::string(name(e.id)), e.explanation});
  return c;
}

const CatalogEntry& AttributeCatalog::at(Attribute a) const {
  auto it = entries_.find(a);
  if (it == entries_.end()) throw std::out_of_range("attribute " + std::string(name(a)) + " missing from catalog");
  return it->second;
}

std::vector<ResidualPair> find_residual_pairs_serial(const std::vector<AttributeSet>& sets,
                                                     const std::vector<std::size_t>& rank, int max_attrs) {
  std::vector<ResidualPair> out;
  for (std::size_t j = 0; j < sets.size(); ++j) {
    if (sets[j].size() > max_attrs || sets[j].empty()) continue;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      if (i == j || !sets[i].subset_of(sets[j]) || sets[j].size() - sets[i].size() != 1) continue;
      const std::uint32_t diff = sets[j].bits() & ~sets[i].bits();
      out.push_back({i, j, static_cast<Attribute>(__builtin_ctz(diff))});
    }
  }
  std::sort(out.begin(), out.end(), [&](const ResidualPair& a, const ResidualPair& b) {
    return std::pair(rank[a.first], rank[a.second]) < std::pair(rank[b.first], rank[b.second]);
  });
  return out;
}

std::vector<ResidualPair> find_residual_pairs(const std::vector<AttributeSet>& sets, const std::vector<std::size_t>& rank,
                                              int max_attrs, int jobs) {
  std::unordered_map<std::uint32_t, std::vector<std::size_t>> groups;
  std::vector<std::uint32_t> masks;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    auto& g = groups[sets[i].bits()];
    if (g.empty()) masks.push_back(sets[i].bits());
    g.push_back(i);
  }
  std::vector<std::vector<ResidualPair>> partial(masks.size());
  const auto n = static_cast<std::int64_t>(masks.size());
  if (jobs <= 0) jobs = 1;
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
  for (std::int64_t m = 0; m < n; ++m) {
    const std::uint32_t target = masks[static_cast<std::size_t>(m)];
    if (target == 0 || __builtin_popcount(target) > max_attrs) continue;
    auto& local = partial[static_cast<std::size_t>(m)];
    for (std::uint32_t rest = target; rest != 0; rest &= rest - 1) {
      const std::uint32_t bit = rest & (~rest + 1);
      auto it = groups.find(target ^ bit);
      if (it == groups.end()) continue;
      const auto residual = static_cast<Attribute>(__builtin_ctz(bit));
      for (const std::size_t i : it->second) {
        for (const std::size_t j : groups.at(target)) local.push_back({i, j, residual});
      }
    }
  }
  std::vector<ResidualPair> out;
  for (auto& p : partial) out.insert(out.end(), p.begin(), p.end());
  std::sort(out.begin(), out.end(), [&](const ResidualPair& a, const ResidualPair& b) {
    return std::pair(rank[a.first], rank[a.second]) < std::pair(rank[b.first], rank[b.second]);
  });
  return out;
}

std::vector<std::size_t> key_rank(const Corpus& corpus) {
  const auto& recs = corpus.records();
  std::vector<std::size_t> order(recs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(recs[a].user_id, recs[a].problem_id) < std::tie(recs[b].user_id, recs[b].problem_id);
  });
  std::vector<std::size_t> rank(recs.size());
  for (std::size_t k = 0; k < order.size(); ++k) rank[order[k]] = k;
  return rank;
}

std::string render_residual_prompt(const std::string& code_1, const std::string& code_2, AttributeSet a1,
                                   AttributeSet a2, const AttributeCatalog& catalog) {
  std::string p(kResidualInstruction);
  p += "\n\n<c1>:\n" + fenced(code_1);
  p += "<c2>:\n" + fenced(code_2);
  p += "A_c1: " + name_list(a1, catalog) + "\n";
  p += "A_c2: " + name_list(a2, catalog);
  return p;
}

std::string render_residual_target(Attribute residual, const AttributeCatalog& catalog) {
  const auto& e = catalog.at(residual);
  return e.display_name + " is present in A_c2 but not in A_c1; the style convention of " + e.display_name +
         " indicates " + e.explanation + ".";
}

ResidualRecord render_record(const UserRecord& r1, AttributeSet a1, const UserRecord& r2, AttributeSet a2,
                             Attribute residual, const AttributeCatalog& catalog) {
  validate_pair(a1, a2, residual);
  ResidualRecord rec;
  rec.code_1 = r1.code;
  rec.code_2 = r2.code;
  rec.attrs_1 = a1;
  rec.attrs_2 = a2;
  rec.residual = residual;
  rec.prompt = render_residual_prompt(r1.code, r2.code, a1, a2, catalog);
  rec.target = render_residual_target(residual, catalog);
  rec.source_ids = {{r1.user_id, r1.problem_id}, {r2.user_id, r2.problem_id}};
  return rec;
}

PromptTarget render_no_residual(const std::string& code, AttributeSet attrs, const AttributeCatalog& catalog) {
  if (attrs.size() != 1) throw std::invalid_argument("single-attribute template needs exactly one attribute");
  const auto& e = catalog.at(attrs.members().front());
  PromptTarget out;
  out.prompt = std::string(kSingleInstruction) + "\n\n<c>:\n" + fenced(code) + "A_u: " + name_list(attrs, catalog);
  out.target = e.display_name + " is present in code; the style convention of " + e.display_name + " indicates " +
               e.explanation + ".";
  return out;
}

std::vector<std::size_t> balance_indices(const std::vector<Attribute>& residuals, int cap, std::uint64_t seed) {
  if (cap < 1) throw std::invalid_argument("cap must be at least 1");
  std::vector<std::vector<std::size_t>> by_attr(kAttributeCount);
  for (std::size_t i = 0; i < residuals.size(); ++i) by_attr[static_cast<std::size_t>(index(residuals[i]))].push_back(i);
  Rng rng(seed);
  std::vector<std::size_t> keep;
  for (auto& group : by_attr) {
    if (group.size() > static_cast<std::size_t>(cap)) {
      // Partial Fisher-Yates: the first `cap` slots become a uniform sample.
      for (std::size_t k = 0; k < static_cast<std::size_t>(cap); ++k) {
        std::swap(group[k], group[k + static_cast<std::size_t>(rng.below(group.size() - k))]);
      }
      group.resize(static_cast<std::size_t>(cap));
    }
    keep.insert(keep.end(), group.begin(), group.end());
  }
  std::sort(keep.begin(), keep.end());
  return keep;
}

std::vector<ResidualRecord> balance(const std::vector<ResidualRecord>& records, int cap, std::uint64_t seed) {
  std::vector<Attribute> residuals;
  residuals.reserve(records.size());
  for (const auto& r : records) residuals.push_back(r.residual);
  std::vector<ResidualRecord> out;
  for (const std::size_t i : balance_indices(residuals, cap, seed)) out.push_back(records[i]);
  return out;
}

Dataset build_dataset(const Corpus& corpus, const AttributeCatalog& catalog, const DatasetOptions& opts) {
  if (opts.max_attrs < 1) throw std::invalid_argument("max_attrs must be at least 1");
  const auto reports = check_records(corpus, opts.jobs);
  Dataset ds;
  // Unparseable records take no part in pairing: their attribute sets are
  // incomplete.
  std::vector<std::size_t> usable;
  std::vector<AttributeSet> sets;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (reports[i].unparseable) {
      ++ds.unparseable_skipped;
      continue;
    }
    usable.push_back(i);
    sets.push_back(extract_attributes(reports[i]));
  }
  const auto full_rank = key_rank(corpus);
  std::vector<std::size_t> rank;
  for (const std::size_t i : usable) rank.push_back(full_rank[i]);
  const auto pairs = find_residual_pairs(sets, rank, opts.max_attrs, opts.jobs);
  ds.pairs_found = pairs.size();
  std::vector<Attribute> residuals;
  for (const auto& p : pairs) residuals.push_back(p.residual);
  const auto& recs = corpus.records();
  for (const std::size_t k : balance_indices(residuals, opts.cap, opts.seed)) {
    const auto& p = pairs[k];
    ds.records.push_back(render_record(recs[usable[p.first]], sets[p.first], recs[usable[p.second]], sets[p.second],
                                       p.residual, catalog));
  }
  return ds;
}

std::string to_jsonl(const std::vector<ResidualRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["prompt"] = r.prompt;
    j["target"] = r.target;
    j["residual_attribute"] = std::string(name(r.residual));
    auto names = [](AttributeSet s) {
      nlohmann::json a = nlohmann::json::array();
      for (const Attribute x : s.members()) a.push_back(std::string(name(x)));
      return a;
    };
    j["attrs_1"] = names(r.attrs_1);
    j["attrs_2"] = names(r.attrs_2);
    nlohmann::json ids = nlohmann::json::array();
    for (const auto& s : r.source_ids) ids.push_back({{"user_id", s.user_id}, {"problem_id", s.problem_id}});
    j["source_ids"] = ids;
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace stylemetric
