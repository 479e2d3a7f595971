#include <benchmark/benchmark.h>

#include <span>

#include "pathpool/bench.hpp"
#include "pathpool/path_pooling.hpp"

namespace {

using namespace pathpool;

const std::vector<bench::BenchQuery>& workload() {
  static const auto queries = [] {
    const auto kg = bench::make_synthetic_kg({});
    return bench::make_workload(kg, {});
  }();
  return queries;
}

void BM_Smooth(benchmark::State& state) {
  const auto& queries = workload();
  PoolingConfig cfg;
  cfg.search = static_cast<SearchAlgorithm>(state.range(0));
  const auto count = static_cast<std::size_t>(state.range(1));

  std::vector<TripleSequence> prefixes;
  for (const auto& q : queries) {
    TripleSequence s;
    s.triples.assign(q.triples.triples.begin(), q.triples.triples.begin() + count);
    prefixes.push_back(std::move(s));
  }

  std::size_t i = 0;
  for (auto _ : state) {
    const auto& q = queries[i % queries.size()];
    benchmark::DoNotOptimize(smooth(prefixes[i % queries.size()], q.query_entities, cfg));
    ++i;
  }
  state.SetLabel(std::string(to_string(cfg.search)));
}

BENCHMARK(BM_Smooth)
    ->ArgsProduct({{static_cast<long>(SearchAlgorithm::dijkstra), static_cast<long>(SearchAlgorithm::bfs),
                    static_cast<long>(SearchAlgorithm::random_walk)},
                   {25, 50, 100, 200, 500}})
    ->ArgNames({"algo", "triples"})
    ->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
