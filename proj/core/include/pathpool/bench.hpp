#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pathpool/path_pooling.hpp"
#include "pathpool/triple_sequence.hpp"
#include "pathpool/triple_store.hpp"

namespace pathpool::bench {

/// Clustered random KG: most edges stay inside a cluster of
/// `cluster_size` entities, a few link clusters together.
struct SyntheticKgConfig {
  std::size_t entity_count = 12000;
  std::size_t cluster_size = 40;
  std::size_t relation_count = 24;
  double intra_cluster_degree = 10.0;
  double inter_cluster_degree = 0.5;
  std::uint64_t seed = 0;
};

TripleStore make_synthetic_kg(const SyntheticKgConfig& config);

struct WorkloadConfig {
  std::size_t query_count = 40;
  /// Triples per query; the largest cell of the grid.
  std::size_t triple_count = 500;
  int max_hops = 6;
  std::uint64_t seed = 0;
};

struct BenchQuery {
  std::vector<std::string> query_entities;
  /// Sorted descending by score.
  TripleSequence triples;
};

/// Samples query entities and scores the surrounding subgraph so that
/// scores decay with hop distance, mimicking a relevance retriever. Each
/// query gets exactly `triple_count` triples, padded with low-scoring far
/// triples when the neighbourhood is too small.
std::vector<BenchQuery> make_workload(const TripleStore& kg, const WorkloadConfig& config);

struct BenchGrid {
  std::vector<SearchAlgorithm> algorithms;
  std::vector<std::size_t> triple_counts;
};

struct LatencyStats {
  double mean_ms = 0.0;
  double median_ms = 0.0;
  double p95_ms = 0.0;
};

/// Nearest-rank median and p95. `samples_ms` must be non-empty.
LatencyStats summarize(std::vector<double> samples_ms);

struct TimingCell {
  SearchAlgorithm algorithm = SearchAlgorithm::dijkstra;
  std::size_t triple_count = 0;
  LatencyStats stats;
  std::size_t query_count = 0;
};

struct TimingReport {
  std::vector<TimingCell> cells;
  std::string environment;

  /// Throws LookupError when the cell was not measured.
  const TimingCell& at(SearchAlgorithm algorithm, std::size_t triple_count) const;
};

inline constexpr std::size_t kMinQueriesPerCell = 30;
inline constexpr std::size_t kWarmupRuns = 3;

/// Wall-clock time of smooth() per query for every (algorithm, count) cell,
/// on the top-`count` prefix of each query's triples. The first
/// kWarmupRuns calls of each cell are not recorded. With `repeats` > 1 each
/// query is timed that many times and contributes its median, which damps
/// scheduler noise on busy machines.
///
/// Throws ConfigError for an empty grid, fewer than kMinQueriesPerCell
/// queries, or queries shorter than a requested count.
TimingReport measure_overhead(std::span<const BenchQuery> queries, const BenchGrid& grid,
                              const PoolingConfig& base, std::size_t repeats = 1);

void write_text_table(std::ostream& out, const TimingReport& report);
/// `algorithm<TAB>triples<TAB>queries<TAB>mean_ms<TAB>median_ms<TAB>p95_ms`.
void write_tsv(std::ostream& out, const TimingReport& report);

/// CPU model, compiler and build type.
std::string describe_environment();

}  // namespace pathpool::bench
