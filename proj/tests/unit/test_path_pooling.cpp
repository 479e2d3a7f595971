#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "pathpool/error.hpp"
#include "pathpool/path_pooling.hpp"
#include "support/random_graphs.hpp"

using namespace pathpool;
using testing_support::make_sequence;

namespace {

const std::vector<std::string> kQueryA = {"A"};
const std::vector<std::string> kNoQuery = {};

TripleSequence worked_example() {
  return make_sequence({{"A", "r1", "B", 0.9}, {"B", "r2", "C", 0.3}, {"D", "r3", "E", 0.5}});
}

std::map<std::string, double> by_head(const TripleSequence& seq) {
  std::map<std::string, double> out;
  for (const auto& t : seq) out[t.head] = t.score;
  return out;
}

std::vector<std::vector<std::uint32_t>> edge_lists(const std::vector<PathKernel>& kernels) {
  std::vector<std::vector<std::uint32_t>> out;
  for (const auto& k : kernels) out.push_back(k.edges);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(ScoredSubgraph, BuildsVerticesAndAdjacency) {
  ScoredSubgraph g(worked_example());
  EXPECT_EQ(g.vertex_count(), 5u);
  EXPECT_EQ(g.edge_count(), 3u);
  const auto b = *g.find_vertex("B");
  ASSERT_EQ(g.in_edges(b).size(), 1u);
  ASSERT_EQ(g.out_edges(b).size(), 1u);
  EXPECT_EQ(g.out_edges(b)[0], 1u);

  ScoredSubgraph fan(make_sequence({{"A", "r", "B", 1.0}, {"A", "r", "C", 1.0}}));
  EXPECT_EQ(fan.out_edges(*fan.find_vertex("A")).size(), 2u);

  ScoredSubgraph single(make_sequence({{"A", "r", "B", 1.0}}));
  EXPECT_EQ(single.vertex_count(), 2u);
  EXPECT_EQ(single.edge_count(), 1u);
}

TEST(ScoredSubgraph, RejectsBadInput) {
  EXPECT_THROW(ScoredSubgraph(TripleSequence{}), EmptyInputError);
  EXPECT_THROW(ScoredSubgraph(make_sequence({{"A", "r", "B", 1.0}, {"A", "r", "B", 0.5}})),
               Error);
  EXPECT_THROW(ScoredSubgraph(make_sequence({{"A", "r", "B", std::nan("")}})), Error);
}

TEST(KernelSearch, WorkedExampleDijkstra) {
  ScoredSubgraph g(worked_example());
  auto kernels = search_path_kernels(g, kQueryA, PoolingConfig{});
  EXPECT_EQ(edge_lists(kernels), (std::vector<std::vector<std::uint32_t>>{{0}, {0, 1}, {2}}));
  for (const auto& k : kernels) {
    EXPECT_EQ(k.direction, k.edges == std::vector<std::uint32_t>{2} ? KernelDirection::singleton
                                                                     : KernelDirection::from_query);
  }
}

TEST(KernelSearch, EmptyQueryGivesSingletons) {
  ScoredSubgraph g(worked_example());
  auto kernels = search_path_kernels(g, kNoQuery, PoolingConfig{});
  EXPECT_EQ(edge_lists(kernels), (std::vector<std::vector<std::uint32_t>>{{0}, {1}, {2}}));
  const std::vector<std::string> absent = {"Z"};
  EXPECT_EQ(search_path_kernels(g, absent, PoolingConfig{}).size(), 3u);
}

TEST(KernelSearch, DiamondTieBrokenLexicographically) {
  auto seq = make_sequence(
      {{"A", "r", "B", 0.5}, {"A", "r", "C", 0.5}, {"B", "r", "D", 0.5}, {"C", "r", "D", 0.5}});
  ScoredSubgraph g(seq);
  auto kernels = search_path_kernels(g, kQueryA, PoolingConfig{});
  EXPECT_EQ(edge_lists(kernels),
            (std::vector<std::vector<std::uint32_t>>{{0}, {0, 2}, {1}, {3}}));
  const auto singleton = std::find_if(kernels.begin(), kernels.end(), [](const auto& k) {
    return k.direction == KernelDirection::singleton;
  });
  ASSERT_NE(singleton, kernels.end());
  EXPECT_EQ(singleton->edges, std::vector<std::uint32_t>{3});
}

TEST(KernelSearch, DiamondPrefersHigherScoreSum) {
  auto seq = make_sequence(
      {{"A", "r", "B", 0.5}, {"A", "r", "C", 0.5}, {"C", "r", "D", 0.75}, {"B", "r", "D", 0.25}});
  ScoredSubgraph g(seq);
  auto kernels = search_path_kernels(g, kQueryA, PoolingConfig{});
  EXPECT_EQ(edge_lists(kernels),
            (std::vector<std::vector<std::uint32_t>>{{0}, {1}, {1, 2}, {3}}));
}

TEST(KernelSearch, ToQueryKernelsStartNearTheQuery) {
  // X -> Y -> A: the to-query kernel to X lists Y->A first.
  auto seq = make_sequence({{"Y", "r", "A", 0.5}, {"X", "r", "Y", 0.25}});
  ScoredSubgraph g(seq);
  auto kernels = search_path_kernels(g, kQueryA, PoolingConfig{});
  EXPECT_EQ(edge_lists(kernels), (std::vector<std::vector<std::uint32_t>>{{0}, {0, 1}}));
  for (const auto& k : kernels) {
    EXPECT_EQ(k.direction, KernelDirection::to_query);
    EXPECT_EQ(g.tail(k.edges[0]), *g.find_vertex("A"));
    for (std::size_t i = 1; i < k.edges.size(); ++i) {
      EXPECT_EQ(g.tail(k.edges[i]), g.head(k.edges[i - 1]));
    }
  }
}

TEST(KernelSearch, BfsEnumeratesSimplePathsUpToMaxLength) {
  auto seq = make_sequence({{"A", "r", "B", 0.5},
                            {"B", "r", "C", 0.5},
                            {"C", "r", "A", 0.5},
                            {"C", "r", "D", 0.5},
                            {"D", "r", "E", 0.5}});
  ScoredSubgraph g(seq);
  PoolingConfig cfg;
  cfg.search = SearchAlgorithm::bfs;
  cfg.max_path_len = 3;
  auto kernels = search_path_kernels(g, kQueryA, cfg);
  for (const auto& k : kernels) {
    EXPECT_LE(k.length(), 3u);
    std::set<std::uint32_t> vertices = {k.direction == KernelDirection::to_query
                                            ? g.tail(k.edges[0])
                                            : g.head(k.edges[0])};
    for (auto e : k.edges) {
      auto far = k.direction == KernelDirection::to_query ? g.head(e) : g.tail(e);
      EXPECT_TRUE(vertices.insert(far).second) << "repeated vertex";
    }
  }
  // forward: AB, ABC, ABCD; reverse: CA, CA<-BC, CA<-BC<-AB is not simple.
  // D->E is out of reach at length 3 and becomes a singleton.
  EXPECT_EQ(edge_lists(kernels), (std::vector<std::vector<std::uint32_t>>{
                                     {0}, {0, 1}, {0, 1, 3}, {2}, {2, 1}, {4}}));
}

TEST(KernelSearch, RandomWalkIsSeededAndBounded) {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 50; ++round) {
    auto c = testing_support::random_case(rng);
    ScoredSubgraph g(c.sequence);
    PoolingConfig cfg;
    cfg.search = SearchAlgorithm::random_walk;
    cfg.walk_count = 16;
    cfg.max_path_len = 3;
    cfg.rng_seed = static_cast<std::uint64_t>(round);
    auto a = search_path_kernels(g, c.query_entities, cfg);
    auto b = search_path_kernels(g, c.query_entities, cfg);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].edges, b[i].edges);
    std::vector<bool> covered(g.edge_count(), false);
    for (const auto& k : a) {
      EXPECT_LE(k.length(), cfg.max_path_len);
      EXPECT_NE(k.direction, KernelDirection::to_query);
      for (std::size_t i = 1; i < k.edges.size(); ++i) {
        EXPECT_EQ(g.head(k.edges[i]), g.tail(k.edges[i - 1]));
      }
      for (auto e : k.edges) covered[e] = true;
    }
    EXPECT_TRUE(std::all_of(covered.begin(), covered.end(), [](bool x) { return x; }));
  }
}

TEST(KernelSearch, KernelsAreUniqueAcrossQueryEntities) {
  auto seq = make_sequence({{"A", "r", "B", 0.5}, {"B", "r", "C", 0.5}});
  ScoredSubgraph g(seq);
  const std::vector<std::string> q = {"A", "B", "A"};
  PoolingConfig cfg;
  cfg.search = SearchAlgorithm::bfs;
  auto kernels = search_path_kernels(g, q, cfg);
  auto lists = edge_lists(kernels);
  EXPECT_EQ(std::adjacent_find(lists.begin(), lists.end()), lists.end());
}

TEST(PoolPath, AverageAndMax) {
  const std::vector<double> scores = {0.9, 0.3, 0.5};
  PathKernel pair{{0, 1}, KernelDirection::from_query, 0.0};
  PathKernel single{{2}, KernelDirection::singleton, 0.0};
  EXPECT_NEAR(pool_path(pair, scores, Pooling::average), 0.6, 1e-12);
  EXPECT_EQ(pool_path(pair, scores, Pooling::max), 0.9);
  EXPECT_EQ(pool_path(single, scores, Pooling::average), 0.5);
  EXPECT_EQ(pool_path(single, scores, Pooling::max), 0.5);
  const std::vector<double> uniform = {0.4, 0.4, 0.4};
  PathKernel all{{0, 1, 2}, KernelDirection::from_query, 0.0};
  EXPECT_EQ(pool_path(all, uniform, Pooling::average), 0.4);
  const std::vector<double> mixed = {0.1, 0.2, 0.3};
  EXPECT_NEAR(pool_path(all, mixed, Pooling::average), 0.2, 1e-15);
  EXPECT_EQ(pool_path(all, uniform, Pooling::max), 0.4);
}

TEST(Smooth, WorkedExample) {
  SmoothingTrace trace;
  auto out = smooth(worked_example(), kQueryA, PoolingConfig{}, &trace);
  auto s = by_head(out);
  EXPECT_NEAR(s["A"], 0.93, 1e-9);
  EXPECT_NEAR(s["B"], 0.615, 1e-9);
  EXPECT_NEAR(s["D"], 0.53, 1e-9);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0].head, "A");
  EXPECT_EQ(out[1].head, "B");
  EXPECT_EQ(out[2].head, "D");
  EXPECT_EQ(out.source, "smooth:dijkstra/avg");
  EXPECT_EQ(trace.shift, 0.0);
  EXPECT_EQ(trace.min_score, 0.3);
  EXPECT_EQ(out[1].retrieval_rank, 1u);
}

TEST(Smooth, SingleTriple) {
  auto out = smooth(make_sequence({{"A", "r", "B", 0.8}}), kQueryA, PoolingConfig{});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_NEAR(out[0].score, 0.88, 1e-12);
}

TEST(Smooth, EmptyQueryUsesSingletonLaw) {
  auto out = smooth(worked_example(), kNoQuery, PoolingConfig{});
  auto s = by_head(out);
  EXPECT_NEAR(s["A"], 0.93, 1e-12);
  EXPECT_NEAR(s["D"], 0.53, 1e-12);
  EXPECT_NEAR(s["B"], 0.33, 1e-12);
  EXPECT_EQ(out[0].head, "A");
  EXPECT_EQ(out[1].head, "D");
  EXPECT_EQ(out[2].head, "B");
}

TEST(Smooth, ShiftsNonPositiveScores) {
  SmoothingTrace trace;
  auto seq = make_sequence({{"A", "r", "B", 0.5}, {"C", "r", "D", 0.0}, {"E", "r", "F", -0.5}});
  auto out = smooth(seq, kNoQuery, PoolingConfig{}, &trace);
  EXPECT_DOUBLE_EQ(trace.shift, 0.5 + kScoreShiftEpsilon);
  EXPECT_NEAR(trace.min_score, kScoreShiftEpsilon, 1e-15);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    EXPECT_DOUBLE_EQ(trace.smoothed[i], trace.scores[i] + trace.min_score / 10.0);
    EXPECT_GT(trace.smoothed[i], 0.0);
  }
  EXPECT_EQ(out[0].head, "A");
  EXPECT_EQ(out[2].head, "E");
}

TEST(Smooth, TiesKeepInputOrder) {
  auto seq = make_sequence({{"A", "r", "B", 0.5}, {"C", "r", "D", 0.5}, {"E", "r", "F", 0.5}});
  auto out = smooth(seq, kNoQuery, PoolingConfig{});
  EXPECT_EQ(out[0].head, "A");
  EXPECT_EQ(out[1].head, "C");
  EXPECT_EQ(out[2].head, "E");
}

TEST(Smooth, Errors) {
  EXPECT_THROW(smooth(TripleSequence{}, kQueryA, PoolingConfig{}), EmptyInputError);
  PoolingConfig bad;
  bad.positional_divisor = 0.0;
  EXPECT_THROW(smooth(worked_example(), kQueryA, bad), ConfigError);
  bad = PoolingConfig{};
  bad.max_path_len = 0;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = PoolingConfig{};
  bad.walk_count = 0;
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(Smooth, MaxPoolingOnWorkedExample) {
  PoolingConfig cfg;
  cfg.pooling = Pooling::max;
  auto s = by_head(smooth(worked_example(), kQueryA, cfg));
  EXPECT_NEAR(s["A"], 0.93, 1e-12);
  EXPECT_NEAR(s["B"], 0.915, 1e-12);
  EXPECT_NEAR(s["D"], 0.53, 1e-12);
}

TEST(ParseEnums, RoundTrip) {
  for (auto a : {SearchAlgorithm::dijkstra, SearchAlgorithm::bfs, SearchAlgorithm::random_walk}) {
    EXPECT_EQ(parse_search_algorithm(to_string(a)), a);
  }
  EXPECT_EQ(parse_search_algorithm("random_walk"), SearchAlgorithm::random_walk);
  EXPECT_EQ(parse_pooling("avg"), Pooling::average);
  EXPECT_EQ(parse_pooling("max"), Pooling::max);
  EXPECT_THROW(parse_pooling("sum"), ConfigError);
  EXPECT_THROW(parse_search_algorithm("dfs"), ConfigError);
}
