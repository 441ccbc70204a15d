// Acceptance checks, one line per criterion:
//   acceptance [--criterion N] [--write-diff]
#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "stylemetric/adapter.hpp"
#include "stylemetric/corpus.hpp"
#include "stylemetric/css_metric.hpp"
#include "stylemetric/eval.hpp"
#include "stylemetric/random.hpp"
#include "stylemetric/residual.hpp"
#include "stylemetric/text_metrics.hpp"

namespace fs = std::filesystem;
using namespace stylemetric;

namespace {

const std::string kData = TEST_DATA_DIR;
const std::string kCli = STYLEMETRIC_CLI;
const fs::path kDiffFile = fs::path(kData) / "checkstyle_diff.txt";

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + p.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---- 1: css metric ----

Outcome css_suite() {
  Outcome o;
  Rng rng(20240601);
  double worst_id = 0, worst_sym = 0;
  for (int i = 0; i < 10000; ++i) {
    StyleVector x, y;
    for (auto& v : x.c) v = rng.uniform() < 0.4 ? 0.0 : rng.uniform();
    for (auto& v : y.c) v = rng.uniform() < 0.4 ? 0.0 : rng.uniform();
    const double c = css(x, y);
    worst_id = std::max(worst_id, std::fabs(css(x, x) - 1.0));
    worst_sym = std::max(worst_sym, std::fabs(c - css(y, x)));
    o.require(c >= 0.0 && c <= 1.0, "css out of [0,1]");
  }
  o.require(worst_id <= 1e-12, "css(v,v) off by " + fmt("%.3e", worst_id));
  o.require(worst_sym <= 1e-12, "asymmetry " + fmt("%.3e", worst_sym));
  const std::vector<double> one{1, 0}, other{0, 1}, half{0.5, 0.5}, skew{0.75, 0.25};
  const double a = js_divergence(one, other);
  const double b = js_divergence(half, one);
  const double k = kl_divergence(half, skew);
  o.require(std::fabs(a - 1.0) <= 1e-6, "js((1,0),(0,1)) = " + fmt("%.9f", a));
  o.require(std::fabs(b - 0.3112781) <= 1e-6, "js((.5,.5),(1,0)) = " + fmt("%.9f", b));
  o.require(std::fabs(k - 0.2075187) <= 1e-6, "kl((.5,.5),(.75,.25)) = " + fmt("%.9f", k));
  if (o.pass) o.detail = "10000 pairs, max |css(v,v)-1| " + fmt("%.1e", worst_id) + ", hand values within 1e-6";
  return o;
}

// ---- 2: checker oracle ----

std::string join(const std::set<int>& s) {
  std::string out = "[";
  for (int v : s) out += (out.size() > 1 ? "," : "") + std::to_string(v);
  return out + "]";
}

struct Agreement {
  int cells = 0;
  int agree = 0;
  int primary_cells = 0;
  int primary_agree = 0;
  std::vector<std::string> diffs;
};

Agreement compare_with_checkstyle() {
  const auto oracle = nlohmann::json::parse(read_file(fs::path(kData) / "checkstyle_oracle.json"));
  Agreement g;
  for (const auto& [file, per] : oracle["files"].items()) {
    // c01..c50 are the generated corpus; later files are extra probes.
    const bool primary = std::stoi(file.substr(1, 2)) <= 50;
    const auto report = run_all(read_file(fs::path(kData) / "checkstyle_corpus" / file), file);
    for (const auto& i : attribute_table()) {
      if (!i.syntax || i.css_index == 0) continue;
      std::set<int> want, got;
      for (const auto& l : per.at(std::string(i.name))) want.insert(l.get<int>());
      for (const auto& v : report.violations) {
        if (v.attribute == i.id) got.insert(v.line);
      }
      const bool same = !report.unparseable && want == got;
      ++g.cells;
      g.agree += same;
      if (primary) {
        ++g.primary_cells;
        g.primary_agree += same;
      }
      if (!same) g.diffs.push_back(file + " " + std::string(i.name) + " ours=" + join(got) + " checkstyle=" + join(want));
    }
  }
  return g;
}

std::string diff_text(const Agreement& g) {
  std::string out =
      "# Disagreements with Checkstyle 8.24 (Google configuration, tabWidth=4) over the 20 syntax criteria.\n"
      "# One line per (file, criterion): flagged lines from this checker and from Checkstyle.\n"
      "# Regenerate with: acceptance --criterion 2 --write-diff\n";
  for (const auto& d : g.diffs) out += d + "\n";
  return out;
}

Outcome checker_oracle(bool write_diff) {
  Outcome o;
  const Agreement g = compare_with_checkstyle();
  const std::string text = diff_text(g);
  if (write_diff) std::ofstream(kDiffFile, std::ios::binary) << text;
  const double rate = 100.0 * g.primary_agree / std::max(1, g.primary_cells);
  o.require(g.primary_cells == 50 * 20, "expected 1000 cells on c01..c50, got " + std::to_string(g.primary_cells));
  o.require(rate >= 95.0, "agreement " + fmt("%.2f%%", rate));
  o.require(fs::exists(kDiffFile), "golden diff file missing");
  if (fs::exists(kDiffFile)) o.require(read_file(kDiffFile) == text, "disagreements differ from the golden diff file");
  if (o.pass) {
    o.detail = std::to_string(g.primary_agree) + "/" + std::to_string(g.primary_cells) + " cells (" + fmt("%.2f%%", rate) +
               ") on 50 files, " + std::to_string(g.agree) + "/" + std::to_string(g.cells) + " on all " +
               std::to_string(g.cells / 20) + ", " + std::to_string(g.diffs.size()) + " documented disagreements";
  }
  return o;
}

// ---- 3: residual dataset ----

std::vector<ResidualPair> brute_force(const std::vector<AttributeSet>& sets, const std::vector<std::size_t>& rank) {
  std::vector<ResidualPair> out;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = 0; j < sets.size(); ++j) {
      if (sets[j].size() > 5) continue;
      int extra = 0, missing = 0;
      Attribute residual{};
      for (int k = 0; k < kAttributeCount; ++k) {
        const auto a = static_cast<Attribute>(k);
        if (sets[j].contains(a) && !sets[i].contains(a)) {
          ++extra;
          residual = a;
        }
        if (sets[i].contains(a) && !sets[j].contains(a)) ++missing;
      }
      if (missing == 0 && extra == 1) out.push_back({i, j, residual});
    }
  }
  std::sort(out.begin(), out.end(), [&](const ResidualPair& a, const ResidualPair& b) {
    return std::pair(rank[a.first], rank[a.second]) < std::pair(rank[b.first], rank[b.second]);
  });
  return out;
}

Outcome residual_dataset() {
  Outcome o;
  const auto corpus = load_corpus(kData + "/synthetic_corpus.jsonl");
  o.require(corpus.size() == 200, "synthetic corpus should hold 200 records");
  const auto reports = check_records(corpus);
  std::vector<AttributeSet> sets;
  for (const auto& r : reports) {
    o.require(!r.unparseable, "synthetic record unparseable");
    sets.push_back(extract_attributes(r));
  }
  const auto rank = key_rank(corpus);
  const auto pairs = find_residual_pairs(sets, rank);
  const auto oracle = brute_force(sets, rank);
  o.require(pairs == oracle, "pair list differs from brute force (" + std::to_string(pairs.size()) + " vs " +
                                 std::to_string(oracle.size()) + ")");

  const auto catalog = AttributeCatalog::builtin();
  const auto ds = build_dataset(corpus, catalog, DatasetOptions{});
  o.require(ds.pairs_found == oracle.size(), "build_dataset found a different pair count");
  std::map<Attribute, int> hist;
  for (const auto& r : ds.records) {
    o.require(r.attrs_1.subset_of(r.attrs_2) && r.attrs_2.size() - r.attrs_1.size() == 1 &&
                  r.attrs_2.contains(r.residual),
              "row violates |A2 \\ A1| = 1");
    o.require(r.attrs_2.size() <= 5, "row has |A2| > 5");
    ++hist[r.residual];
  }
  int max_bin = 0;
  for (const auto& [_, n] : hist) max_bin = std::max(max_bin, n);
  o.require(max_bin <= 600, "histogram bin above 600");

  // Small fixture: one clean record and six that add only UpperEll.
  Corpus small;
  small.add({"u0", "p0", "q", "public class A {\n  private long total = 1L;\n}\n"});
  for (int k = 1; k <= 6; ++k) {
    small.add({"u" + std::to_string(k), "p0", "q", "public class A {\n  private long total = " + std::to_string(k) + "l;\n}\n"});
  }
  DatasetOptions capped;
  capped.cap = 3;
  const auto sds = build_dataset(small, catalog, capped);
  o.require(sds.pairs_found == 6, "small fixture should give 6 pairs, got " + std::to_string(sds.pairs_found));
  o.require(sds.records.size() == 3, "cap=3 kept " + std::to_string(sds.records.size()));
  const auto sc = build_dataset(corpus, catalog, capped);
  std::map<Attribute, int> chist;
  for (const auto& r : sc.records) ++chist[r.residual];
  for (const auto& [_, n] : chist) o.require(n <= 3, "cap=3 exceeded on the synthetic corpus");
  if (o.pass) {
    o.detail = std::to_string(pairs.size()) + " pairs equal brute force, " + std::to_string(ds.records.size()) +
               " rows valid, max bin " + std::to_string(max_bin) + ", cap=3 keeps 3 of 6";
  }
  return o;
}

// ---- 4: adapter math ----

Outcome adapter_math() {
  using namespace stylemetric::adapter;
  Outcome o;
  Rng rng(404);
  double worst_sum = 0;
  for (int i = 0; i < 10000; ++i) {
    const std::size_t V = 2 + rng.below(40);
    Vec g(V), a(V), b(V);
    double sa = 0, sb = 0;
    for (std::size_t k = 0; k < V; ++k) {
      g[k] = rng.uniform();
      sa += a[k] = rng.uniform() + 1e-3;
      sb += b[k] = rng.uniform() + 1e-3;
    }
    for (auto& x : a) x /= sa;
    for (auto& x : b) x /= sb;
    const auto p = merge_distributions(g, a, b);
    double s = 0;
    for (double x : p) s += x;
    worst_sum = std::max(worst_sum, std::fabs(s - 1.0));
    if (i < 1000) {
      o.require(merge_distributions(Vec(V, 0.0), a, b) == b, "g = 0 does not return P_o exactly");
      o.require(merge_distributions(Vec(V, 1.0), a, b) == a, "g = 1 does not return P_s exactly");
    }
  }
  o.require(worst_sum <= 1e-9, "merged sum off by " + fmt("%.3e", worst_sum));
  for (const std::size_t K : {2, 5, 50}) {
    const std::vector<Vec> corr(K, Vec(K, 0.37));
    std::vector<Vec> same(K, Vec{0.5, -1.0, 2.0});
    const double lk = std::log(static_cast<double>(K));
    o.require(std::fabs(contrastive_from_correlations(corr) - lk) <= 1e-9, "contrastive != ln K for K=" + std::to_string(K));
    o.require(std::fabs(contrastive_loss(same, same) - lk) <= 1e-9, "contrastive != ln K for equal features");
  }
  double worst = 0;
  int nudged = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto sc = make_scenario(ScenarioOptions{}, seed);
    const auto r = grad_check_model(sc.model, sc.users, LossOptions{}, 1e-5);
    worst = std::max(worst, r.max_rel_error);
    nudged += r.nudged;
  }
  o.require(worst < 1e-5, "gradient relative error " + fmt("%.3e", worst));
  if (o.pass) {
    o.detail = "merge sum within " + fmt("%.1e", worst_sum) + ", exact limits, ln K for K=2,5,50, grad rel err " +
               fmt("%.2e", worst) + " at 20 points (" + std::to_string(nudged) + " ReLU units nudged)";
  }
  return o;
}

// ---- 5: eval harness ----

Outcome eval_harness() {
  Outcome o;
  const auto pairs = load_manifest(kData + "/eval_pairs/manifest.jsonl");
  o.require(pairs.size() == 20, "expected 20 committed pairs");
  for (const auto& p : pairs) {
    for (const std::string* code : {&p.generated, &p.reference}) {
      const auto row = evaluate_pair({*code, *code, p.user_id, p.problem_id});
      o.require(row.css && *row.css == 1.0 && row.bleu4 == 1.0 && row.rouge1 == 1.0 && row.rouge2 == 1.0,
                "identical pair " + p.problem_id + " does not score 1");
    }
  }
  const auto golden = nlohmann::json::parse(read_file(fs::path(kData) / "eval_golden.json"));
  double worst = 0;
  for (const auto& g : golden["pairs"]) {
    const std::string id = g["problem_id"];
    const auto gen = read_file(fs::path(kData) / "eval_pairs" / (id + "_gen.java"));
    const auto ref = read_file(fs::path(kData) / "eval_pairs" / (id + "_ref.java"));
    worst = std::max({worst, std::fabs(bleu4(gen, ref) - g["bleu4"].get<double>()),
                      std::fabs(rouge_n(gen, ref, 1) - g["rouge1"].get<double>()),
                      std::fabs(rouge_n(gen, ref, 2) - g["rouge2"].get<double>())});
  }
  o.require(golden["pairs"].size() == 20, "golden file should hold 20 pairs");
  o.require(worst <= 1e-6, "text metric deviation " + fmt("%.3e", worst));

  Corpus c;
  for (int p = 0; p < 1000; ++p) c.add({"u" + std::to_string(p % 7), "p" + std::to_string(p), "q", "class A {}\n"});
  const auto s = split_by_problem(c, {0.8, 0.1, 0.1}, 17);
  std::map<std::string, int> seen;
  for (const Corpus* part : {&s.train, &s.valid, &s.test}) {
    for (const auto& [pid, _] : part->problems()) ++seen[pid];
  }
  int overlap = 0;
  for (const auto& [_, n] : seen) overlap += n > 1;
  o.require(seen.size() == 1000 && overlap == 0, std::to_string(overlap) + " problems in more than one split");
  o.require(s.train.problems().size() == 800 && s.valid.problems().size() == 100 && s.test.problems().size() == 100,
            "split sizes are not 800/100/100");
  if (o.pass) {
    o.detail = "identical pairs score 1, max golden deviation " + fmt("%.1e", worst) +
               ", 1000 problems split 800/100/100 with no overlap";
  }
  return o;
}

// ---- 6: CLI determinism ----

std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 1469598103934665603ULL) {
  for (const unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

struct CliRun {
  int code = -1;
  std::uint64_t hash = 0;
};

// Hashes stdout plus every file the command wrote into `out`.
CliRun run_hashed(const std::string& args, const fs::path& out) {
  fs::remove_all(out);
  fs::create_directories(out);
  const std::string cmd = "cd " + out.string() + " && " + kCli + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) throw std::runtime_error("popen failed");
  std::string text;
  std::array<char, 4096> buf{};
  for (std::size_t n; (n = fread(buf.data(), 1, buf.size(), p)) > 0;) text.append(buf.data(), n);
  const int status = pclose(p);
  CliRun r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.hash = fnv1a(text);
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(out)) {
    if (e.is_regular_file()) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) r.hash = fnv1a(f.filename().string() + read_file(f), r.hash);
  return r;
}

Outcome cli_determinism() {
  Outcome o;
  const fs::path tmp = fs::temp_directory_path() / "stylemetric_acceptance_cli";
  const std::string corpus = kData + "/synthetic_corpus.jsonl";
  const std::string cs = kData + "/checkstyle_corpus";
  const std::vector<std::string> commands{
      "check " + cs,
      "--format text check " + cs,
      "vector " + cs + "/c01.java",
      "css " + cs + "/c01.java " + cs + "/c02.java",
      "profile " + corpus + " --user u007",
      "evaluate " + kData + "/eval_pairs/manifest.jsonl -o report.json",
      "--seed 5 dataset " + corpus + " -o train.jsonl --eval-out eval.jsonl --eval-cap 2",
      "--seed 5 dataset " + corpus + " --cap 3",
      "--seed 5 split " + corpus + " --out-dir parts",
      "stats " + corpus,
      "--seed 5 adapter demo",
      "--seed 5 adapter grad-check --points 2",
  };
  int checked = 0;
  for (const auto& args : commands) {
    const auto a = run_hashed(args, tmp / "a");
    const auto b = run_hashed(args, tmp / "b");
    o.require(a.code == 0 || a.code == 1, "'" + args + "' exited " + std::to_string(a.code));
    o.require(a.code == b.code && a.hash == b.hash, "'" + args + "' differs between runs");
    ++checked;
  }
  // Thread count must not change artifacts either.
  const auto one = run_hashed("--jobs 1 --seed 5 dataset " + corpus, tmp / "a");
  const auto many = run_hashed("--jobs 8 --seed 5 dataset " + corpus, tmp / "b");
  o.require(one.hash == many.hash, "dataset output depends on --jobs");
  fs::remove_all(tmp);
  if (o.pass) o.detail = std::to_string(checked) + " commands byte-identical across two runs and across --jobs";
  return o;
}

struct Criterion {
  const char* title;
  double limit_seconds;  // 0: no limit
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  int only = 0;
  bool write_diff = false;
  app.add_option("--criterion", only, "Run one criterion (1-6)")->check(CLI::Range(1, 6));
  app.add_flag("--write-diff", write_diff, "Rewrite the golden Checkstyle diff file");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {"css metric suite", 5, css_suite},
      {"checker agrees with Checkstyle", 300, [&] { return checker_oracle(write_diff); }},
      {"residual dataset", 30, residual_dataset},
      {"adapter math", 60, adapter_math},
      {"eval harness", 0, eval_harness},
      {"cli determinism", 0, cli_determinism},
  };
  bool all = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (only != 0 && static_cast<std::size_t>(only) != k + 1) continue;
    const auto& c = criteria[k];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_seconds > 0 && secs >= c.limit_seconds) o.require(false, "took " + fmt("%.1f s", secs));
    std::printf("acceptance %zu %s: %s (%.2f s) %s\n", k + 1, c.title, o.pass ? "PASS" : "FAIL", secs,
                o.detail.c_str());
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
