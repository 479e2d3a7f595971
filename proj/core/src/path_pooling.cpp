#include "pathpool/path_pooling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pathpool/error.hpp"

namespace pathpool {

std::string_view to_string(SearchAlgorithm algorithm) {
  switch (algorithm) {
    case SearchAlgorithm::dijkstra: return "dijkstra";
    case SearchAlgorithm::bfs: return "bfs";
    case SearchAlgorithm::random_walk: return "random-walk";
  }
  return "?";
}

std::string_view to_string(Pooling pooling) {
  return pooling == Pooling::average ? "avg" : "max";
}

SearchAlgorithm parse_search_algorithm(std::string_view text) {
  if (text == "dijkstra") return SearchAlgorithm::dijkstra;
  if (text == "bfs") return SearchAlgorithm::bfs;
  if (text == "random-walk" || text == "random_walk") return SearchAlgorithm::random_walk;
  throw ConfigError("unknown search algorithm '" + std::string(text) + "'");
}

Pooling parse_pooling(std::string_view text) {
  if (text == "avg" || text == "average") return Pooling::average;
  if (text == "max") return Pooling::max;
  throw ConfigError("unknown pooling '" + std::string(text) + "'");
}

void PoolingConfig::validate() const {
  if (!(positional_divisor > 0.0) || !std::isfinite(positional_divisor)) {
    throw ConfigError("positional divisor a must be a positive finite number");
  }
  if (max_path_len < 1) throw ConfigError("max_path_len must be >= 1");
  if (walk_count < 1) throw ConfigError("walk_count must be >= 1");
}

// --- ScoredSubgraph ---------------------------------------------------------

ScoredSubgraph::ScoredSubgraph(const TripleSequence& sequence) {
  if (sequence.empty()) throw EmptyInputError("cannot build a subgraph from an empty sequence");
  validate_sequence(sequence);

  auto vertex = [this](const std::string& label) {
    auto [it, inserted] = index_.try_emplace(label, static_cast<std::uint32_t>(labels_.size()));
    if (inserted) {
      labels_.push_back(label);
      out_.emplace_back();
      in_.emplace_back();
    }
    return it->second;
  };

  edges_.reserve(sequence.size());
  for (const auto& t : sequence) {
    const auto h = vertex(t.head);
    const auto tl = vertex(t.tail);
    const auto e = static_cast<std::uint32_t>(edges_.size());
    edges_.push_back(Edge{h, tl, t.relation, t.score});
    out_[h].push_back(e);
    in_[tl].push_back(e);
  }
}

std::optional<std::uint32_t> ScoredSubgraph::find_vertex(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void ScoredSubgraph::set_scores(std::span<const double> scores) {
  if (scores.size() != edges_.size()) throw Error("score count does not match edge count");
  for (std::size_t e = 0; e < edges_.size(); ++e) edges_[e].score = scores[e];
}

// --- pooling ----------------------------------------------------------------

double pool_path(const PathKernel& kernel, std::span<const double> scores, Pooling strategy) {
  if (strategy == Pooling::max) {
    double best = -std::numeric_limits<double>::infinity();
    for (auto e : kernel.edges) best = std::max(best, scores[e]);
    return best;
  }
  // Mean taken as an offset from the smallest member so that a kernel of
  // equal scores pools to exactly that score, as max pooling does.
  double lo = std::numeric_limits<double>::infinity();
  for (auto e : kernel.edges) lo = std::min(lo, scores[e]);
  double excess = 0.0;
  for (auto e : kernel.edges) excess += scores[e] - lo;
  return lo + excess / static_cast<double>(kernel.edges.size());
}

TripleSequence smooth(const TripleSequence& sequence,
                      std::span<const std::string> query_entities,
                      const PoolingConfig& config, SmoothingTrace* trace) {
  config.validate();
  ScoredSubgraph graph(sequence);

  std::vector<double> scores;
  scores.reserve(sequence.size());
  for (const auto& t : sequence) scores.push_back(t.score);

  double min_score = *std::min_element(scores.begin(), scores.end());
  double shift = 0.0;
  if (min_score <= 0.0) {
    shift = kScoreShiftEpsilon - min_score;
    for (auto& s : scores) s += shift;
    min_score = *std::min_element(scores.begin(), scores.end());
    graph.set_scores(scores);
  }

  auto kernels = search_path_kernels(graph, query_entities, config);

  std::vector<double> smoothed(scores.size(), -std::numeric_limits<double>::infinity());
  const double a = config.positional_divisor;
  for (auto& kernel : kernels) {
    kernel.pooled_score = pool_path(kernel, scores, config.pooling);
    for (std::size_t i = 0; i < kernel.edges.size(); ++i) {
      const double positional = min_score / (static_cast<double>(i + 1) * a);
      auto& slot = smoothed[kernel.edges[i]];
      slot = std::max(slot, kernel.pooled_score + positional);
    }
  }

  std::vector<std::size_t> order(sequence.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return smoothed[x] > smoothed[y]; });

  TripleSequence out;
  out.source = "smooth:" + std::string(to_string(config.search)) + "/" +
               std::string(to_string(config.pooling));
  out.triples.reserve(order.size());
  for (auto i : order) {
    ScoredTriple t = sequence[i];
    t.score = smoothed[i];
    out.triples.push_back(std::move(t));
  }

  if (trace) {
    trace->shift = shift;
    trace->min_score = min_score;
    trace->scores = std::move(scores);
    trace->kernels = std::move(kernels);
    trace->smoothed = std::move(smoothed);
  }
  return out;
}

}  // namespace pathpool
