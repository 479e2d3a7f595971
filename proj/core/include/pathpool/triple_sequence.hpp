#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace pathpool {

/// A retrieved triple with its score. Labels are carried by value so a
/// sequence stays meaningful after it leaves the store it came from.
struct ScoredTriple {
  std::string head;
  std::string relation;
  std::string tail;
  double score = 0.0;
  /// Position in the retrieval output; the tie-breaker for every later
  /// reordering.
  std::size_t retrieval_rank = 0;

  bool same_triple(const ScoredTriple& other) const {
    return head == other.head && relation == other.relation && tail == other.tail;
  }
};

/// Ordered triples plus the name of the stage that produced them
/// ("precomputed", "smooth:dijkstra/average", ...).
struct TripleSequence {
  std::vector<ScoredTriple> triples;
  std::string source;

  std::size_t size() const noexcept { return triples.size(); }
  bool empty() const noexcept { return triples.empty(); }
  const ScoredTriple& operator[](std::size_t i) const { return triples[i]; }
  auto begin() const noexcept { return triples.begin(); }
  auto end() const noexcept { return triples.end(); }
};

/// Throws if any score is NaN/infinite or a triple occurs twice.
void validate_sequence(const TripleSequence& sequence);

}  // namespace pathpool
