#include <algorithm>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "pathpool/path_pooling.hpp"

namespace pathpool {

namespace {

struct EdgeSeqHash {
  std::size_t operator()(const std::vector<std::uint32_t>& edges) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto e : edges) {
      h ^= e;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

/// Traversal in one orientation. Forward follows out-edges (near = head,
/// far = tail); reverse follows in-edges (near = tail, far = head).
struct Orientation {
  const ScoredSubgraph& graph;
  bool forward;

  std::span<const std::uint32_t> edges(std::uint32_t v) const {
    return forward ? graph.out_edges(v) : graph.in_edges(v);
  }
  std::uint32_t near(std::uint32_t e) const { return forward ? graph.head(e) : graph.tail(e); }
  std::uint32_t far(std::uint32_t e) const { return forward ? graph.tail(e) : graph.head(e); }
  KernelDirection direction() const {
    return forward ? KernelDirection::from_query : KernelDirection::to_query;
  }

  /// Label order of edges read from the query side: near, relation, far.
  bool edge_less(std::uint32_t a, std::uint32_t b) const {
    const auto& na = graph.vertex_label(near(a));
    const auto& nb = graph.vertex_label(near(b));
    if (na != nb) return na < nb;
    const auto& ra = graph.relation(a);
    const auto& rb = graph.relation(b);
    if (ra != rb) return ra < rb;
    return graph.vertex_label(far(a)) < graph.vertex_label(far(b));
  }
};

class KernelCollector {
 public:
  explicit KernelCollector(std::size_t edge_count) : covered_(edge_count, false) {}

  void add(std::vector<std::uint32_t> edges, KernelDirection direction) {
    if (!seen_.insert(edges).second) return;
    for (auto e : edges) covered_[e] = true;
    kernels_.push_back(PathKernel{std::move(edges), direction, 0.0});
  }

  std::vector<PathKernel> finish() && {
    for (std::uint32_t e = 0; e < covered_.size(); ++e) {
      if (!covered_[e]) kernels_.push_back(PathKernel{{e}, KernelDirection::singleton, 0.0});
    }
    return std::move(kernels_);
  }

 private:
  std::vector<PathKernel> kernels_;
  std::unordered_set<std::vector<std::uint32_t>, EdgeSeqHash> seen_;
  std::vector<bool> covered_;
};

// One minimum-hop path per reachable vertex. Ties: larger cumulative score,
// then the lexicographically smaller edge-label sequence. Hop-minimal paths
// have hop-minimal prefixes, so a layer-by-layer relaxation with a per-layer
// lexicographic rank of the chosen paths finds the same path an exhaustive
// search would.
void shortest_path_kernels(const Orientation& o, std::span<const std::uint32_t> sources,
                           KernelCollector& out) {
  const auto n = o.graph.vertex_count();
  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  std::vector<int> dist(n, -1);
  std::vector<double> sum(n, 0.0);
  std::vector<std::uint32_t> pred(n, kNone);
  std::vector<std::size_t> rank(n, 0);

  std::vector<std::uint32_t> layer(sources.begin(), sources.end());
  std::sort(layer.begin(), layer.end(), [&](auto a, auto b) {
    return o.graph.vertex_label(a) < o.graph.vertex_label(b);
  });
  for (std::size_t i = 0; i < layer.size(); ++i) {
    dist[layer[i]] = 0;
    rank[layer[i]] = i;
  }

  auto path_less = [&](std::uint32_t e, std::uint32_t incumbent) {
    const auto ru = rank[o.near(e)];
    const auto ri = rank[o.near(incumbent)];
    if (ru != ri) return ru < ri;
    return o.edge_less(e, incumbent);
  };

  std::vector<std::uint32_t> path;
  for (int depth = 0; !layer.empty(); ++depth) {
    std::vector<std::uint32_t> next;
    for (auto u : layer) {
      for (auto e : o.edges(u)) {
        const auto v = o.far(e);
        const double candidate = sum[u] + o.graph.score(e);
        if (dist[v] == -1) {
          dist[v] = depth + 1;
          sum[v] = candidate;
          pred[v] = e;
          next.push_back(v);
        } else if (dist[v] == depth + 1 &&
                   (candidate > sum[v] || (candidate == sum[v] && path_less(e, pred[v])))) {
          sum[v] = candidate;
          pred[v] = e;
        }
      }
    }

    std::sort(next.begin(), next.end(),
              [&](auto a, auto b) { return path_less(pred[a], pred[b]); });
    for (std::size_t i = 0; i < next.size(); ++i) rank[next[i]] = i;

    for (auto v : next) {
      path.clear();
      for (auto w = v; dist[w] > 0; w = o.near(pred[w])) path.push_back(pred[w]);
      std::reverse(path.begin(), path.end());
      out.add(path, o.direction());
    }
    layer = std::move(next);
  }
}

// Every simple path of at most max_len edges, depth-first in adjacency order.
void simple_path_kernels(const Orientation& o, std::span<const std::uint32_t> sources,
                         std::size_t max_len, KernelCollector& out) {
  std::vector<bool> on_path(o.graph.vertex_count(), false);
  std::vector<std::uint32_t> path;

  auto extend = [&](auto& self, std::uint32_t u) -> void {
    for (auto e : o.edges(u)) {
      const auto v = o.far(e);
      if (on_path[v]) continue;
      path.push_back(e);
      out.add(path, o.direction());
      if (path.size() < max_len) {
        on_path[v] = true;
        self(self, v);
        on_path[v] = false;
      }
      path.pop_back();
    }
  };

  for (auto s : sources) {
    on_path[s] = true;
    extend(extend, s);
    on_path[s] = false;
  }
}

void random_walk_kernels(const ScoredSubgraph& graph, std::span<const std::uint32_t> sources,
                         const PoolingConfig& config, KernelCollector& out) {
  std::mt19937_64 rng(config.rng_seed);
  std::vector<bool> on_path(graph.vertex_count(), false);
  std::vector<std::uint32_t> path;
  std::vector<std::uint32_t> candidates;
  // Prefix trie: (node, edge) -> child node. A new child is a new prefix.
  std::unordered_map<std::uint64_t, std::uint32_t> trie;
  std::uint32_t node_count = 0;

  for (auto s : sources) {
    const std::uint32_t root = node_count++;
    for (std::size_t w = 0; w < config.walk_count; ++w) {
      path.clear();
      auto node = root;
      auto cur = s;
      on_path[cur] = true;
      while (path.size() < config.max_path_len) {
        candidates.clear();
        for (auto e : graph.out_edges(cur)) {
          if (!on_path[graph.tail(e)]) candidates.push_back(e);
        }
        if (candidates.empty()) break;
        std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
        const auto e = candidates[pick(rng)];
        path.push_back(e);
        const std::uint64_t key = (std::uint64_t{node} << 32) | e;
        auto [it, inserted] = trie.try_emplace(key, node_count);
        if (inserted) {
          ++node_count;
          out.add(path, KernelDirection::from_query);
        }
        node = it->second;
        cur = graph.tail(e);
        on_path[cur] = true;
      }
      on_path[s] = false;
      for (auto e : path) on_path[graph.tail(e)] = false;
    }
  }
}

}  // namespace

std::vector<PathKernel> search_path_kernels(const ScoredSubgraph& graph,
                                            std::span<const std::string> query_entities,
                                            const PoolingConfig& config) {
  config.validate();

  std::vector<std::uint32_t> sources;
  for (const auto& label : query_entities) {
    auto v = graph.find_vertex(label);
    if (v && std::find(sources.begin(), sources.end(), *v) == sources.end()) {
      sources.push_back(*v);
    }
  }

  KernelCollector collector(graph.edge_count());
  if (!sources.empty()) {
    const Orientation forward{graph, true};
    const Orientation reverse{graph, false};
    switch (config.search) {
      case SearchAlgorithm::dijkstra:
        shortest_path_kernels(forward, sources, collector);
        shortest_path_kernels(reverse, sources, collector);
        break;
      case SearchAlgorithm::bfs:
        simple_path_kernels(forward, sources, config.max_path_len, collector);
        simple_path_kernels(reverse, sources, config.max_path_len, collector);
        break;
      case SearchAlgorithm::random_walk:
        random_walk_kernels(graph, sources, config, collector);
        break;
    }
  }
  return std::move(collector).finish();
}

}  // namespace pathpool
