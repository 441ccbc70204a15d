#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "stylemetric/adapter.hpp"
#include "stylemetric/corpus.hpp"
#include "stylemetric/css_metric.hpp"
#include "stylemetric/eval.hpp"
#include "stylemetric/residual.hpp"
#include "stylemetric/style_checks.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace stylemetric;

namespace {

constexpr int kExitClean = 0;
constexpr int kExitFindings = 1;
constexpr int kExitError = 2;

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Global {
  std::string format = "json";
  int jobs = 0;
  std::uint64_t seed = 0;
  bool json() const { return format == "json"; }
};

int resolve_jobs(int flag) {
  if (const char* env = std::getenv("STYLEMETRIC_JOBS"); env && *env) {
    try {
      flag = std::stoi(env);
    } catch (const std::exception&) {
      throw Failure(std::string("STYLEMETRIC_JOBS is not an integer: ") + env);
    }
  }
  if (flag <= 0) flag = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return flag;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Failure("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Failure("cannot write " + path);
  f << text;
}

std::vector<std::string> expand_paths(const std::vector<std::string>& inputs) {
  std::vector<std::string> out;
  for (const auto& p : inputs) {
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      std::vector<std::string> found;
      for (const auto& e : fs::recursive_directory_iterator(p)) {
        if (e.is_regular_file() && e.path().extension() == ".java") found.push_back(e.path().string());
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.push_back(p);
    }
  }
  return out;
}

ordered_json names_json(AttributeSet s) {
  ordered_json a = ordered_json::array();
  for (const Attribute x : s.members()) a.push_back(std::string(name(x)));
  return a;
}

ordered_json vector_json(const StyleVector& v) {
  ordered_json j = ordered_json::object();
  for (const auto& i : attribute_table()) {
    if (i.css_index > 0) j[std::string(i.name)] = v[i.id];
  }
  return j;
}

std::string vector_text(const StyleVector& v) {
  std::string out;
  char buf[64];
  for (const auto& i : attribute_table()) {
    if (i.css_index == 0) continue;
    std::snprintf(buf, sizeof buf, " %.6f\n", v[i.id]);
    out += std::string(i.name) + buf;
  }
  return out;
}

CheckReport checked_file(const std::string& path) {
  CheckReport r = run_all(read_file(path), path);
  if (r.unparseable) throw Failure(path + ": unparseable (" + r.diagnostic + ")");
  return r;
}

// ---- commands ----

int cmd_check(const Global& g, const std::vector<std::string>& inputs) {
  const auto paths = expand_paths(inputs);
  const auto n = static_cast<std::int64_t>(paths.size());
  std::vector<CheckReport> reports(paths.size());
  std::vector<std::string> errors(paths.size());
#pragma omp parallel for schedule(dynamic) num_threads(g.jobs)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      reports[k] = run_all(read_file(paths[k]), paths[k]);
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  }
  int code = kExitClean;
  for (std::size_t k = 0; k < paths.size(); ++k) {
    if (!errors[k].empty()) {
      std::cerr << "stylemetric: " << errors[k] << "\n";
      code = kExitError;
      continue;
    }
    const auto& r = reports[k];
    if (!r.violations.empty() && code == kExitClean) code = kExitFindings;
    if (g.json()) {
      ordered_json j;
      j["file"] = r.file;
      j["unparseable"] = r.unparseable;
      if (r.unparseable) j["diagnostic"] = r.diagnostic;
      j["attributes"] = names_json(extract_attributes(r));
      ordered_json vs = ordered_json::array();
      for (const auto& v : r.violations) {
        vs.push_back({{"attribute", std::string(name(v.attribute))},
                      {"line", v.line},
                      {"column", v.column},
                      {"message", v.message}});
      }
      j["violations"] = vs;
      std::cout << j.dump() << "\n";
    } else {
      if (r.unparseable) std::cout << r.file << ": unparseable: " << r.diagnostic << "\n";
      for (const auto& v : r.violations) {
        std::cout << r.file << ":" << v.line << ":" << v.column << ": [" << name(v.attribute) << "] " << v.message
                  << "\n";
      }
    }
  }
  return code;
}

int cmd_vector(const Global& g, const std::string& path) {
  const StyleVector v = style_vector(checked_file(path));
  if (g.json()) {
    ordered_json j;
    j["file"] = path;
    j["vector"] = vector_json(v);
    std::cout << j.dump() << "\n";
  } else {
    std::cout << vector_text(v);
  }
  return kExitClean;
}

int cmd_css(const Global& g, const std::string& gen, const std::string& ref, double eps) {
  if (!(eps > 0)) throw Failure("--epsilon must be positive");
  const double score = css(style_vector(checked_file(gen)), style_vector(checked_file(ref)), eps);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", score);
  if (g.json()) {
    ordered_json j;
    j["generated"] = gen;
    j["reference"] = ref;
    j["css"] = score;
    j["css_rounded"] = buf;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << buf << "\n";
  }
  return kExitClean;
}

int cmd_profile(const Global& g, const std::string& corpus_path, const std::string& user) {
  const Corpus corpus = load_corpus(corpus_path);
  if (corpus.by_user(user).empty()) throw Failure("unknown user " + user);
  const StyleVector v = user_profile(corpus, check_records(corpus, g.jobs), user);
  if (g.json()) {
    ordered_json j;
    j["user_id"] = user;
    j["records"] = corpus.by_user(user).size();
    j["vector"] = vector_json(v);
    std::cout << j.dump() << "\n";
  } else {
    std::cout << vector_text(v);
  }
  return kExitClean;
}

int cmd_evaluate(const Global& g, const std::string& manifest, const std::string& out) {
  const EvalReport r = evaluate_pairs(load_manifest(manifest), g.jobs);
  if (!g.json()) {
    char buf[256];
    std::string text;
    for (const auto& row : r.rows) {
      std::snprintf(buf, sizeof buf, "%s %s css=%s bleu4=%.6f rouge1=%.6f rouge2=%.6f\n", row.user_id.c_str(),
                    row.problem_id.c_str(), row.css ? std::to_string(*row.css).c_str() : "skipped", row.bleu4,
                    row.rouge1, row.rouge2);
      text += buf;
    }
    std::snprintf(buf, sizeof buf, "mean css=%.6f bleu4=%.6f rouge1=%.6f rouge2=%.6f count=%zu skipped=%zu\n",
                  r.mean_css, r.mean_bleu4, r.mean_rouge1, r.mean_rouge2, r.count, r.skipped_unparseable);
    write_output(out, text + buf);
    return kExitClean;
  }
  ordered_json rows = ordered_json::array();
  for (const auto& row : r.rows) {
    ordered_json j;
    j["user_id"] = row.user_id;
    j["problem_id"] = row.problem_id;
    j["css"] = row.css ? ordered_json(*row.css) : ordered_json(nullptr);
    j["bleu4"] = row.bleu4;
    j["rouge1"] = row.rouge1;
    j["rouge2"] = row.rouge2;
    rows.push_back(j);
  }
  ordered_json agg;
  agg["css"] = r.mean_css;
  agg["bleu4"] = r.mean_bleu4;
  agg["rouge1"] = r.mean_rouge1;
  agg["rouge2"] = r.mean_rouge2;
  agg["count"] = r.count;
  agg["skipped_unparseable"] = r.skipped_unparseable;
  ordered_json j;
  j["rows"] = rows;
  j["aggregates"] = agg;
  write_output(out, j.dump(2) + "\n");
  return kExitClean;
}

struct DatasetFlags {
  std::string out;
  std::string eval_out;
  int max_attrs = kDefaultMaxAttrs;
  int cap = kDefaultCap;
  int eval_cap = kDefaultEvalCap;
};

int cmd_dataset(const Global& g, const std::string& corpus_path, const DatasetFlags& f) {
  if (f.cap < 1 || f.eval_cap < 1) throw Failure("caps must be at least 1");
  if (f.max_attrs < 1) throw Failure("--max-attrs must be at least 1");
  const Corpus corpus = load_corpus(corpus_path);
  const Dataset ds = build_dataset(corpus, AttributeCatalog::builtin(), {f.max_attrs, f.cap, g.seed, g.jobs});
  write_output(f.out, to_jsonl(ds.records));
  std::size_t eval_rows = 0;
  if (!f.eval_out.empty()) {
    const auto sample = balance(ds.records, f.eval_cap, g.seed);
    eval_rows = sample.size();
    write_output(f.eval_out, to_jsonl(sample));
  }
  ordered_json summary;
  summary["records_in"] = corpus.size();
  summary["duplicates_dropped"] = corpus.duplicates_dropped;
  summary["unparseable_skipped"] = ds.unparseable_skipped;
  summary["pairs_found"] = ds.pairs_found;
  summary["rows_written"] = ds.records.size();
  if (!f.eval_out.empty()) summary["eval_rows_written"] = eval_rows;
  (f.out.empty() || f.out == "-" ? std::cerr : std::cout) << summary.dump() << "\n";
  return kExitClean;
}

int cmd_split(const Global& g, const std::string& corpus_path, const std::string& out_dir,
              const std::vector<double>& ratios) {
  if (ratios.size() != 3) throw Failure("--ratios takes three values");
  const Corpus corpus = load_corpus(corpus_path);
  const Split s = split_by_problem(corpus, {ratios[0], ratios[1], ratios[2]}, g.seed);
  fs::create_directories(out_dir);
  const std::pair<const char*, const Corpus*> parts[] = {{"train", &s.train}, {"valid", &s.valid}, {"test", &s.test}};
  ordered_json summary;
  for (const auto& [label, c] : parts) {
    write_output((fs::path(out_dir) / (std::string(label) + ".jsonl")).string(), corpus_to_jsonl(*c));
    summary[label] = {{"records", c->size()}, {"problems", c->problems().size()}};
  }
  std::cout << summary.dump() << "\n";
  return kExitClean;
}

int cmd_stats(const Global& g, const std::string& corpus_path) {
  const CorpusStats s = corpus_stats(load_corpus(corpus_path));
  ordered_json j;
  j["records"] = s.records;
  j["users"] = s.users;
  j["problems"] = s.problems;
  j["mean_records_per_user"] = s.mean_records_per_user;
  j["min_records_per_user"] = s.min_records_per_user;
  j["max_records_per_user"] = s.max_records_per_user;
  j["mean_code_lines"] = s.mean_code_lines;
  j["duplicates_dropped"] = s.duplicates_dropped;
  if (g.json()) {
    std::cout << j.dump() << "\n";
  } else {
    for (const auto& [k, v] : j.items()) std::cout << k << " " << v.dump() << "\n";
  }
  return kExitClean;
}

struct AdapterFlags {
  adapter::ScenarioOptions scenario;
  adapter::LossOptions loss;
  bool raw = false;
  bool exclude_positive = false;
  int points = 20;
  double step = 1e-5;
  double tolerance = 1e-5;
};

adapter::LossOptions loss_options(const AdapterFlags& f) {
  adapter::LossOptions o = f.loss;
  o.renormalize = !f.raw;
  o.include_positive = !f.exclude_positive;
  if (!(o.tau > 0)) throw Failure("--tau must be positive");
  return o;
}

ordered_json vec_json(const adapter::Vec& v) { return ordered_json(v); }

int cmd_adapter_demo(const Global& g, const AdapterFlags& f) {
  const auto opts = loss_options(f);
  const auto sc = adapter::make_scenario(f.scenario, g.seed);
  const auto loss = adapter::evaluate_loss(sc.model, sc.users, opts);
  const auto steps = adapter::trace(sc.model, sc.users, opts);
  ordered_json users = ordered_json::array();
  for (std::size_t u = 0; u < sc.users.size(); ++u) {
    ordered_json trace = ordered_json::array();
    for (const auto& st : steps[u]) {
      trace.push_back({{"target", st.target}, {"P_s", vec_json(st.p_s)}, {"g", vec_json(st.g)}, {"P", vec_json(st.p)}});
    }
    ordered_json uj;
    uj["user_id"] = sc.users[u].state.user_id;
    uj["attributes"] = names_json(sc.users[u].state.attrs);
    uj["p_hat"] = vec_json(adapter::global_style_feature(sc.users[u].state));
    uj["steps"] = trace;
    users.push_back(uj);
  }
  ordered_json j;
  j["seed"] = g.seed;
  j["H"] = f.scenario.H;
  j["V"] = f.scenario.V;
  j["m"] = f.scenario.m;
  j["tau"] = opts.tau;
  j["alpha"] = opts.alpha;
  j["renormalize"] = opts.renormalize;
  j["include_positive"] = opts.include_positive;
  j["users"] = users;
  j["loss"] = {{"imp", loss.l_imp}, {"cl", loss.l_cl}, {"total", loss.total}};
  std::cout << j.dump(g.json() ? -1 : 2) << "\n";
  return kExitClean;
}

int cmd_adapter_grad_check(const Global& g, const AdapterFlags& f) {
  const auto opts = loss_options(f);
  if (f.points < 1) throw Failure("--points must be at least 1");
  double worst = 0;
  int nudged = 0;
  std::size_t params = 0;
  for (int k = 0; k < f.points; ++k) {
    auto sc = adapter::make_scenario(f.scenario, g.seed + static_cast<std::uint64_t>(k));
    const auto r = adapter::grad_check_model(sc.model, sc.users, opts, f.step, g.jobs);
    worst = std::max(worst, r.max_rel_error);
    nudged += r.nudged;
    params = r.parameters;
  }
  const bool ok = worst < f.tolerance;
  if (g.json()) {
    ordered_json j;
    j["points"] = f.points;
    j["parameters_per_point"] = params;
    j["max_rel_error"] = worst;
    j["tolerance"] = f.tolerance;
    j["nudged_relu_units"] = nudged;
    j["pass"] = ok;
    std::cout << j.dump() << "\n";
  } else {
    std::printf("max relative error %.3e over %d points (%d ReLU units nudged): %s\n", worst, f.points, nudged,
                ok ? "ok" : "FAIL");
  }
  return ok ? kExitClean : kExitFindings;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Java coding-style metrics, residual datasets and adapter math"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--jobs", g.jobs, "Worker threads (0: all cores; STYLEMETRIC_JOBS overrides)");
  app.add_option("--seed", g.seed, "Seed for every random choice");

  std::vector<std::string> check_paths;
  auto* check = app.add_subcommand("check", "Report style violations per file");
  check->add_option("paths", check_paths, "Java files or directories")->required();

  std::string file_a, file_b;
  double eps = kDefaultEpsilon;
  auto* vector = app.add_subcommand("vector", "Print the 24-criterion style vector of a file");
  vector->add_option("file", file_a)->required();

  auto* css_cmd = app.add_subcommand("css", "Coding style score between generated and reference code");
  css_cmd->add_option("generated", file_a)->required();
  css_cmd->add_option("reference", file_b)->required();
  css_cmd->add_option("--epsilon", eps, "Smoothing added before normalization");

  std::string corpus_path, user, out;
  auto* profile = app.add_subcommand("profile", "Mean style vector of one user's records");
  profile->add_option("corpus", corpus_path)->required();
  profile->add_option("--user", user)->required();

  auto* evaluate = app.add_subcommand("evaluate", "Score generated/reference pairs from a manifest");
  evaluate->add_option("manifest", file_a)->required();
  evaluate->add_option("-o,--out", out, "Report path (stdout by default)");

  DatasetFlags df;
  auto* dataset = app.add_subcommand("dataset", "Build attribute-residual prompts from a corpus");
  dataset->add_option("corpus", corpus_path)->required();
  dataset->add_option("-o,--out", df.out, "JSONL output (stdout by default)");
  dataset->add_option("--max-attrs", df.max_attrs, "Largest attribute set of the second code")->capture_default_str();
  dataset->add_option("--cap", df.cap, "Records kept per residual attribute")->capture_default_str();
  dataset->add_option("--eval-out", df.eval_out, "Also write an evaluation sample here");
  dataset->add_option("--eval-cap", df.eval_cap, "Records per attribute in the evaluation sample")
      ->capture_default_str();

  std::string out_dir;
  std::vector<double> ratios{0.8, 0.1, 0.1};
  auto* split = app.add_subcommand("split", "Split a corpus by problem into train/valid/test");
  split->add_option("corpus", corpus_path)->required();
  split->add_option("--out-dir", out_dir)->required();
  split->add_option("--ratios", ratios, "train valid test")->expected(3)->delimiter(',');

  auto* stats = app.add_subcommand("stats", "Corpus statistics");
  stats->add_option("corpus", corpus_path)->required();

  AdapterFlags af;
  auto* adapter_cmd = app.add_subcommand("adapter", "Toy multi-user style adapter");
  adapter_cmd->require_subcommand(1);
  for (CLI::App* sub : {adapter_cmd->add_subcommand("demo", "Emit a JSON trace of one forward pass"),
                        adapter_cmd->add_subcommand("grad-check", "Compare analytic and numeric gradients")}) {
    sub->add_option("--hidden", af.scenario.H, "Hidden width H")->capture_default_str();
    sub->add_option("--vocab", af.scenario.V, "Vocabulary size")->capture_default_str();
    sub->add_option("--m", af.scenario.m, "Implicit feature vectors per user")->capture_default_str();
    sub->add_option("--users", af.scenario.users)->capture_default_str();
    sub->add_option("--tokens", af.scenario.tokens, "Code tokens per user")->capture_default_str();
    sub->add_option("--tau", af.loss.tau, "Contrastive temperature")->capture_default_str();
    sub->add_option("--alpha", af.loss.alpha, "Contrastive loss weight")->capture_default_str();
    sub->add_flag("--raw", af.raw, "Skip renormalizing the merged distribution");
    sub->add_flag("--exclude-positive", af.exclude_positive, "Leave the positive pair out of the denominator");
  }
  auto* grad_check = adapter_cmd->get_subcommand("grad-check");
  grad_check->add_option("--points", af.points, "Random points to check")->capture_default_str();
  grad_check->add_option("--step", af.step, "Central difference step")->capture_default_str();
  grad_check->add_option("--tolerance", af.tolerance)->capture_default_str();

  for (CLI::App* sub : app.get_subcommands({})) {
    sub->fallthrough();
    for (CLI::App* nested : sub->get_subcommands({})) nested->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitClean : kExitError;
  }

  try {
    g.jobs = resolve_jobs(g.jobs);
    if (*check) return cmd_check(g, check_paths);
    if (*vector) return cmd_vector(g, file_a);
    if (*css_cmd) return cmd_css(g, file_a, file_b, eps);
    if (*profile) return cmd_profile(g, corpus_path, user);
    if (*evaluate) return cmd_evaluate(g, file_a, out);
    if (*dataset) return cmd_dataset(g, corpus_path, df);
    if (*split) return cmd_split(g, corpus_path, out_dir, ratios);
    if (*stats) return cmd_stats(g, corpus_path);
    if (adapter_cmd->got_subcommand("demo")) return cmd_adapter_demo(g, af);
    if (*grad_check) return cmd_adapter_grad_check(g, af);
  } catch (const std::exception& e) {
    std::cerr << "stylemetric: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
