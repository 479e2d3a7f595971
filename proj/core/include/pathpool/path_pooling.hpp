#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pathpool/triple_sequence.hpp"

namespace pathpool {

enum class SearchAlgorithm { dijkstra, bfs, random_walk };
enum class Pooling { average, max };

std::string_view to_string(SearchAlgorithm algorithm);
std::string_view to_string(Pooling pooling);
/// Accepts `dijkstra`, `bfs`, `random-walk` / `random_walk`.
SearchAlgorithm parse_search_algorithm(std::string_view text);
/// Accepts `avg` / `average` and `max`.
Pooling parse_pooling(std::string_view text);

struct PoolingConfig {
  SearchAlgorithm search = SearchAlgorithm::dijkstra;
  Pooling pooling = Pooling::average;
  /// Divisor `a` of the positional term s_min / (i * a).
  double positional_divisor = 10.0;
  /// Longest kernel produced by bfs and random_walk.
  std::size_t max_path_len = 4;
  /// Walks started from each query entity in random_walk mode.
  std::size_t walk_count = 256;
  std::uint64_t rng_seed = 0;

  /// Throws ConfigError.
  void validate() const;
};

/// G_k: the retrieved triples as a directed graph over their endpoints.
///
/// Vertices are numbered in first-seen order (head before tail) and edge e
/// is triple e of the sequence. Adjacency lists keep sequence order.
class ScoredSubgraph {
 public:
  /// Throws EmptyInputError on an empty sequence; duplicates or non-finite
  /// scores are rejected by validate_sequence().
  explicit ScoredSubgraph(const TripleSequence& sequence);

  std::size_t vertex_count() const noexcept { return labels_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  std::optional<std::uint32_t> find_vertex(std::string_view label) const;
  const std::string& vertex_label(std::uint32_t v) const { return labels_[v]; }

  std::uint32_t head(std::size_t e) const { return edges_[e].head; }
  std::uint32_t tail(std::size_t e) const { return edges_[e].tail; }
  const std::string& relation(std::size_t e) const { return edges_[e].relation; }
  double score(std::size_t e) const { return edges_[e].score; }

  std::span<const std::uint32_t> out_edges(std::uint32_t v) const { return out_[v]; }
  std::span<const std::uint32_t> in_edges(std::uint32_t v) const { return in_[v]; }

  /// Replaces the edge scores (e.g. after the non-positive score shift).
  void set_scores(std::span<const double> scores);

 private:
  struct Edge {
    std::uint32_t head;
    std::uint32_t tail;
    std::string relation;
    double score;
  };

  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::uint32_t>> out_;
  std::vector<std::vector<std::uint32_t>> in_;
};

enum class KernelDirection { from_query, to_query, singleton };

/// A simple path of triples anchored at a query entity. Position 0 is the
/// triple nearest the query entity in both directions: for from_query
/// kernels edge i+1 leaves the tail of edge i, for to_query kernels edge
/// i+1 enters the head of edge i.
struct PathKernel {
  std::vector<std::uint32_t> edges;
  KernelDirection direction = KernelDirection::singleton;
  double pooled_score = 0.0;

  std::size_t length() const noexcept { return edges.size(); }
};

/// Path kernels over `graph` anchored at `query_entities` (labels; labels
/// not in the graph are ignored). Every edge appears in at least one kernel:
/// edges no search reaches become singleton kernels. Kernels with identical
/// edge sequences are emitted once.
std::vector<PathKernel> search_path_kernels(const ScoredSubgraph& graph,
                                            std::span<const std::string> query_entities,
                                            const PoolingConfig& config);

/// Mean or maximum of the member edge scores. The kernel must be non-empty.
double pool_path(const PathKernel& kernel, std::span<const double> scores,
                 Pooling strategy);

/// Intermediate values of one smooth() call.
struct SmoothingTrace {
  /// Amount added to every score before pooling (0 when all scores > 0).
  double shift = 0.0;
  /// Minimum score after the shift; the numerator of the positional term.
  double min_score = 0.0;
  /// Input-order scores after the shift.
  std::vector<double> scores;
  /// Kernels with pooled_score filled in.
  std::vector<PathKernel> kernels;
  /// Smoothed score per input position.
  std::vector<double> smoothed;
};

/// Path pooling: pools scores along every kernel, adds the positional term
/// s_min / (i * a) for the triple at 1-based kernel position i, and keeps
/// each triple's maximum over the kernels containing it.
///
/// If the minimum input score is not positive, every score is first shifted
/// by (1e-6 - s_min). The result holds one entry per input triple with its
/// smoothed score, sorted descending; ties keep input order.
TripleSequence smooth(const TripleSequence& sequence,
                      std::span<const std::string> query_entities,
                      const PoolingConfig& config,
                      SmoothingTrace* trace = nullptr);

inline constexpr double kScoreShiftEpsilon = 1e-6;

}  // namespace pathpool
