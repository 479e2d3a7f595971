#include "pathpool/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <random>
#include <thread>

#include <fmt/format.h>

#include "pathpool/error.hpp"

namespace pathpool::bench {

TripleStore make_synthetic_kg(const SyntheticKgConfig& config) {
  if (config.entity_count < 2 || config.cluster_size < 2 || config.relation_count < 1) {
    throw ConfigError("synthetic KG needs >= 2 entities, cluster size >= 2, >= 1 relation");
  }
  std::mt19937_64 rng(config.seed);
  std::poisson_distribution<int> intra(config.intra_cluster_degree);
  std::poisson_distribution<int> inter(config.inter_cluster_degree);
  std::uniform_int_distribution<std::size_t> any_entity(0, config.entity_count - 1);
  std::uniform_int_distribution<std::size_t> any_relation(0, config.relation_count - 1);

  auto entity = [](std::size_t i) { return "e" + std::to_string(i); };
  auto relation = [](std::size_t i) { return "rel." + std::to_string(i); };

  TripleStore kg;
  for (std::size_t i = 0; i < config.entity_count; ++i) {
    const std::size_t cluster_begin = i / config.cluster_size * config.cluster_size;
    const std::size_t cluster_end = std::min(cluster_begin + config.cluster_size, config.entity_count);
    std::uniform_int_distribution<std::size_t> in_cluster(cluster_begin, cluster_end - 1);

    const int local = cluster_end - cluster_begin > 1 ? intra(rng) : 0;
    for (int k = 0; k < local; ++k) {
      auto j = in_cluster(rng);
      if (j == i) continue;
      kg.add(entity(i), relation(any_relation(rng)), entity(j));
    }
    const int remote = inter(rng);
    for (int k = 0; k < remote; ++k) {
      auto j = any_entity(rng);
      if (j == i) continue;
      kg.add(entity(i), relation(any_relation(rng)), entity(j));
    }
  }
  return kg;
}

std::vector<BenchQuery> make_workload(const TripleStore& kg, const WorkloadConfig& config) {
  if (kg.empty()) throw ConfigError("cannot sample a workload from an empty KG");
  if (config.triple_count < 1 || config.query_count < 1 || config.max_hops < 1) {
    throw ConfigError("workload needs triple_count, query_count and max_hops >= 1");
  }
  if (kg.triple_count() < config.triple_count) {
    throw ConfigError("KG has fewer triples than the requested workload size");
  }

  std::mt19937_64 rng(config.seed);
  std::uniform_int_distribution<std::size_t> any_entity(0, kg.entity_count() - 1);
  std::uniform_int_distribution<std::size_t> any_triple(0, kg.triple_count() - 1);
  std::uniform_real_distribution<double> jitter(0.5, 1.0);

  std::vector<BenchQuery> workload;
  workload.reserve(config.query_count);
  while (workload.size() < config.query_count) {
    const auto q = static_cast<EntityId>(any_entity(rng));
    if (kg.outgoing(q).empty()) continue;

    const EntityId sources[] = {q};
    const auto dist = triple_hop_distances(kg, sources, config.max_hops);
    std::vector<std::pair<double, std::size_t>> scored;
    for (std::size_t i = 0; i < dist.size(); ++i) {
      if (dist[i] > 0) scored.emplace_back(jitter(rng) * std::ldexp(1.0, 1 - dist[i]), i);
    }
    std::vector<bool> used(kg.triple_count(), false);
    for (const auto& [s, i] : scored) used[i] = true;
    const double floor = std::ldexp(1.0, -config.max_hops);
    while (scored.size() < config.triple_count) {
      const auto i = any_triple(rng);
      if (used[i]) continue;
      used[i] = true;
      scored.emplace_back(jitter(rng) * floor, i);
    }

    const auto keep = static_cast<std::ptrdiff_t>(config.triple_count);
    std::partial_sort(scored.begin(), scored.begin() + keep, scored.end(),
                      [](const auto& a, const auto& b) {
                        return a.first != b.first ? a.first > b.first : a.second < b.second;
                      });
    BenchQuery bq;
    bq.query_entities = {kg.entity_label(q)};
    bq.triples.source = "synthetic";
    for (std::ptrdiff_t r = 0; r < keep; ++r) {
      const auto& t = kg.triple(scored[r].second);
      bq.triples.triples.push_back(ScoredTriple{kg.entity_label(t.head),
                                                kg.relation_label(t.relation),
                                                kg.entity_label(t.tail), scored[r].first,
                                                static_cast<std::size_t>(r)});
    }
    workload.push_back(std::move(bq));
  }
  return workload;
}

LatencyStats summarize(std::vector<double> samples_ms) {
  if (samples_ms.empty()) throw ConfigError("no samples to summarize");
  std::sort(samples_ms.begin(), samples_ms.end());
  const auto n = samples_ms.size();
  auto nearest_rank = [&](double p) {
    const auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
    return samples_ms[std::clamp<std::size_t>(rank, 1, n) - 1];
  };
  LatencyStats s;
  s.mean_ms = std::accumulate(samples_ms.begin(), samples_ms.end(), 0.0) / static_cast<double>(n);
  s.median_ms = nearest_rank(0.5);
  s.p95_ms = nearest_rank(0.95);
  return s;
}

const TimingCell& TimingReport::at(SearchAlgorithm algorithm, std::size_t triple_count) const {
  for (const auto& c : cells) {
    if (c.algorithm == algorithm && c.triple_count == triple_count) return c;
  }
  throw LookupError(fmt::format("no timing cell for {} at {} triples", to_string(algorithm),
                                triple_count));
}

TimingReport measure_overhead(std::span<const BenchQuery> queries, const BenchGrid& grid,
                              const PoolingConfig& base, std::size_t repeats) {
  if (repeats < 1) throw ConfigError("repeats must be >= 1");
  if (grid.algorithms.empty() || grid.triple_counts.empty()) {
    throw ConfigError("benchmark grid is empty");
  }
  if (queries.size() < kMinQueriesPerCell) {
    throw ConfigError(fmt::format("benchmark needs >= {} queries per cell, got {}",
                                  kMinQueriesPerCell, queries.size()));
  }
  for (auto count : grid.triple_counts) {
    if (count < 1) throw ConfigError("triple counts must be >= 1");
    for (const auto& q : queries) {
      if (q.triples.size() < count) {
        throw ConfigError(fmt::format("a query has {} triples, cell needs {}", q.triples.size(), count));
      }
    }
  }

  using clock = std::chrono::steady_clock;
  static_assert(clock::is_steady);

  TimingReport report;
  report.environment = describe_environment();
  std::size_t sink = 0;
  for (auto algorithm : grid.algorithms) {
    PoolingConfig config = base;
    config.search = algorithm;
    for (auto count : grid.triple_counts) {
      std::vector<TripleSequence> inputs;
      inputs.reserve(queries.size());
      for (const auto& q : queries) {
        TripleSequence s;
        s.source = q.triples.source;
        s.triples.assign(q.triples.triples.begin(),
                         q.triples.triples.begin() + static_cast<std::ptrdiff_t>(count));
        inputs.push_back(std::move(s));
      }

      for (std::size_t w = 0; w < kWarmupRuns; ++w) {
        sink += smooth(inputs[w % inputs.size()], queries[w % queries.size()].query_entities, config).size();
      }

      std::vector<double> samples;
      samples.reserve(inputs.size());
      std::vector<double> runs(repeats);
      for (std::size_t i = 0; i < inputs.size(); ++i) {
        for (auto& run : runs) {
          const auto start = clock::now();
          const auto out = smooth(inputs[i], queries[i].query_entities, config);
          const auto stop = clock::now();
          sink += out.size();
          run = std::chrono::duration<double, std::milli>(stop - start).count();
        }
        std::nth_element(runs.begin(), runs.begin() + repeats / 2, runs.end());
        samples.push_back(runs[repeats / 2]);
      }
      report.cells.push_back(TimingCell{algorithm, count, summarize(std::move(samples)), inputs.size()});
    }
  }
  if (sink == 0) report.environment += " (empty results)";
  return report;
}

void write_text_table(std::ostream& out, const TimingReport& report) {
  out << fmt::format("{:<12} {:>8} {:>8} {:>10} {:>10} {:>10}\n", "algorithm", "triples",
                     "queries", "mean_ms", "median_ms", "p95_ms");
  for (const auto& c : report.cells) {
    out << fmt::format("{:<12} {:>8} {:>8} {:>10.3f} {:>10.3f} {:>10.3f}\n",
                       to_string(c.algorithm), c.triple_count, c.query_count, c.stats.mean_ms,
                       c.stats.median_ms, c.stats.p95_ms);
  }
  out << "# " << report.environment << '\n';
}

void write_tsv(std::ostream& out, const TimingReport& report) {
  out << "# " << report.environment << '\n';
  out << "algorithm\ttriples\tqueries\tmean_ms\tmedian_ms\tp95_ms\n";
  for (const auto& c : report.cells) {
    out << fmt::format("{}\t{}\t{}\t{:.6f}\t{:.6f}\t{:.6f}\n", to_string(c.algorithm),
                       c.triple_count, c.query_count, c.stats.mean_ms, c.stats.median_ms,
                       c.stats.p95_ms);
  }
}

std::string describe_environment() {
  std::string cpu = "unknown cpu";
  std::ifstream cpuinfo("/proc/cpuinfo");
  for (std::string line; std::getline(cpuinfo, line);) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) cpu = line.substr(colon + 2);
      break;
    }
  }
#ifdef NDEBUG
  constexpr const char* build = "optimized";
#else
  constexpr const char* build = "debug";
#endif
#if defined(__clang__)
  const std::string compiler = "clang " __clang_version__;
#elif defined(__GNUC__)
  const std::string compiler = "gcc " __VERSION__;
#else
  const std::string compiler = "unknown compiler";
#endif
  return fmt::format("{}; {} hw threads; {}; {} build", cpu, std::thread::hardware_concurrency(),
                     compiler, build);
}

}  // namespace pathpool::bench
