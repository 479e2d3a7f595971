#pragma once

#include <algorithm>
#include <bit>
#include <map>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "pathpool/triple_sequence.hpp"

namespace testing_support {

struct RandomCase {
  pathpool::TripleSequence sequence;
  std::vector<std::string> query_entities;
};

struct GraphShape {
  std::size_t max_vertices = 12;
  std::size_t max_edges = 20;
  std::size_t relations = 3;
  /// Scores are multiples of 1/64 so path sums are exact.
  bool quantized = true;
  bool allow_non_positive = false;
  std::size_t max_query_entities = 2;
};

/// Random scored triple sequence with distinct triples in descending score
/// order, plus 0..max_query_entities query entities drawn from its vertices.
inline RandomCase random_case(std::mt19937_64& rng, const GraphShape& shape = {}) {
  std::uniform_int_distribution<std::size_t> vcount(2, shape.max_vertices);
  const auto n = vcount(rng);
  std::uniform_int_distribution<std::size_t> vertex(0, n - 1);
  std::uniform_int_distribution<std::size_t> relation(0, shape.relations - 1);
  std::uniform_int_distribution<std::size_t> ecount(1, shape.max_edges);
  std::uniform_int_distribution<int> quant(shape.allow_non_positive ? -32 : 1, 64);
  std::uniform_real_distribution<double> real(shape.allow_non_positive ? -1.0 : 1e-3, 1.0);

  auto label = [](std::size_t v) { return std::string(1, static_cast<char>('A' + v)); };

  RandomCase c;
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> used;
  const auto target = ecount(rng);
  for (std::size_t attempt = 0; c.sequence.size() < target && attempt < 200; ++attempt) {
    const auto h = vertex(rng);
    const auto t = vertex(rng);
    const auto r = relation(rng);
    if (h == t || !used.emplace(h, r, t).second) continue;
    const double score = shape.quantized ? quant(rng) / 64.0 : real(rng);
    c.sequence.triples.push_back({label(h), "r" + std::to_string(r), label(t), score, 0});
  }
  if (c.sequence.empty()) c.sequence.triples.push_back({"A", "r0", "B", 0.5, 0});

  std::stable_sort(c.sequence.triples.begin(), c.sequence.triples.end(),
                   [](const auto& a, const auto& b) { return a.score > b.score; });
  for (std::size_t i = 0; i < c.sequence.size(); ++i) c.sequence.triples[i].retrieval_rank = i;

  std::uniform_int_distribution<std::size_t> qcount(0, shape.max_query_entities);
  const auto q = qcount(rng);
  for (std::size_t i = 0; i < q; ++i) {
    const auto& t = c.sequence.triples[std::uniform_int_distribution<std::size_t>(
        0, c.sequence.size() - 1)(rng)];
    c.query_entities.push_back(rng() % 2 ? t.head : t.tail);
  }
  return c;
}

inline bool same_multiset(const pathpool::TripleSequence& a, const pathpool::TripleSequence& b) {
  auto keys = [](const pathpool::TripleSequence& s) {
    std::vector<std::tuple<std::string, std::string, std::string>> k;
    for (const auto& t : s) k.emplace_back(t.head, t.relation, t.tail);
    std::sort(k.begin(), k.end());
    return k;
  };
  return keys(a) == keys(b);
}

inline pathpool::TripleSequence make_sequence(
    std::initializer_list<std::tuple<const char*, const char*, const char*, double>> rows) {
  pathpool::TripleSequence s;
  std::size_t rank = 0;
  for (const auto& [h, r, t, score] : rows) s.triples.push_back({h, r, t, score, rank++});
  return s;
}

inline std::vector<std::string> keys(const pathpool::TripleSequence& seq) {
  std::vector<std::string> out;
  for (const auto& t : seq) out.push_back(t.head + "|" + t.relation + "|" + t.tail);
  return out;
}

/// True when every pair ordered by more than `tol` in `a` keeps its order in
/// `b`. Pairs closer than `tol` may swap through floating-point rounding.
inline bool ranking_preserved(const pathpool::TripleSequence& a, const pathpool::TripleSequence& b,
                              double tol = 1e-9) {
  std::map<std::string, double> sb;
  const auto kb = keys(b);
  for (std::size_t i = 0; i < b.size(); ++i) sb[kb[i]] = b[i].score;
  const auto ka = keys(a);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      if (a[i].score > a[j].score + tol && !(sb[ka[i]] > sb[ka[j]])) return false;
    }
  }
  return true;
}

/// Same triples in the same order with bit-equal scores.
inline bool bit_identical(const pathpool::TripleSequence& a, const pathpool::TripleSequence& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].same_triple(b[i]) ||
        std::bit_cast<std::uint64_t>(a[i].score) != std::bit_cast<std::uint64_t>(b[i].score)) {
      return false;
    }
  }
  return true;
}

}  // namespace testing_support
