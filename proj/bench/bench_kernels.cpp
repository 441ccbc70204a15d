#include <benchmark/benchmark.h>

#include <thread>

#include "stylemetric/adapter.hpp"
#include "stylemetric/corpus.hpp"
#include "stylemetric/eval.hpp"
#include "stylemetric/random.hpp"
#include "stylemetric/residual.hpp"

using namespace stylemetric;

namespace {

const std::string kData = BENCH_DATA_DIR;

int threads() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

const Corpus& corpus() {
  static const Corpus c = load_corpus(kData + "/synthetic_corpus.jsonl");
  return c;
}

const std::vector<EvalPair>& pairs() {
  static const std::vector<EvalPair> p = load_manifest(kData + "/eval_pairs/manifest.jsonl");
  return p;
}

std::vector<AttributeSet> random_sets(std::size_t n) {
  Rng rng(1);
  std::vector<AttributeSet> out(n);
  for (auto& s : out) {
    for (int k = 0; k < 10; ++k) {
      if (rng.uniform() < 0.2) s.insert(static_cast<Attribute>(k));
    }
  }
  return out;
}

void BM_CheckRecordsSerial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(check_records_serial(corpus()));
}
void BM_CheckRecordsParallel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(check_records(corpus(), threads()));
}

void BM_EvaluatePairsSerial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(evaluate_pairs_serial(pairs()));
}
void BM_EvaluatePairsParallel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(evaluate_pairs(pairs(), threads()));
}

void BM_ResidualPairsSerial(benchmark::State& st) {
  const auto sets = random_sets(static_cast<std::size_t>(st.range(0)));
  std::vector<std::size_t> rank(sets.size());
  for (std::size_t i = 0; i < rank.size(); ++i) rank[i] = i;
  for (auto _ : st) benchmark::DoNotOptimize(find_residual_pairs_serial(sets, rank));
}
void BM_ResidualPairsParallel(benchmark::State& st) {
  const auto sets = random_sets(static_cast<std::size_t>(st.range(0)));
  std::vector<std::size_t> rank(sets.size());
  for (std::size_t i = 0; i < rank.size(); ++i) rank[i] = i;
  for (auto _ : st) benchmark::DoNotOptimize(find_residual_pairs(sets, rank, 5, threads()));
}

struct GradFixture {
  adapter::Scenario sc = adapter::make_scenario({}, 1);
  adapter::Vec x, grad;
  adapter::Objective f;
  GradFixture() {
    adapter::nudge_relu_kinks(sc.model, sc.users);
    adapter::Gradients g;
    adapter::loss_and_gradients(sc.model, sc.users, {}, g);
    grad = adapter::flatten(g);
    x = adapter::flatten(sc.model, sc.users);
    f = [this](const adapter::Vec& v) {
      auto m = sc.model;
      auto u = sc.users;
      adapter::unflatten(v, m, u);
      return adapter::evaluate_loss(m, u, {}).total;
    };
  }
};

void BM_GradCheckSerial(benchmark::State& st) {
  GradFixture fx;
  for (auto _ : st) benchmark::DoNotOptimize(adapter::grad_check_serial(fx.f, fx.grad, fx.x));
}
void BM_GradCheckParallel(benchmark::State& st) {
  GradFixture fx;
  for (auto _ : st) benchmark::DoNotOptimize(adapter::grad_check(fx.f, fx.grad, fx.x, 1e-5, threads()));
}

}  // namespace

BENCHMARK(BM_CheckRecordsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CheckRecordsParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluatePairsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluatePairsParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ResidualPairsSerial)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ResidualPairsParallel)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GradCheckSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GradCheckParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
