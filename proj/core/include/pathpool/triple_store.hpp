#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace pathpool {

using EntityId = std::uint32_t;
using RelationId = std::uint32_t;

/// A directed knowledge-graph edge (head, relation, tail).
struct Triple {
  EntityId head = 0;
  RelationId relation = 0;
  EntityId tail = 0;

  friend auto operator<=>(const Triple&, const Triple&) = default;
};

struct TripleHash {
  std::size_t operator()(const Triple& t) const noexcept {
    std::uint64_t h = (std::uint64_t{t.head} << 32) ^ t.tail;
    h ^= std::uint64_t{t.relation} * 0x9E3779B97F4A7C15ULL;
    h ^= h >> 29;
    return static_cast<std::size_t>(h * 0xBF58476D1CE4E5B9ULL);
  }
};

/// Interned triple set with forward and reverse adjacency.
///
/// Entities and relations are interned in first-seen order, so loading the
/// same bytes twice yields the same ids. Duplicate (h, r, t) edges are
/// dropped on insertion.
class TripleStore {
 public:
  /// Inserts a triple, interning labels as needed. Returns false when the
  /// triple is already present. Labels must be non-empty.
  bool add(std::string_view head, std::string_view relation, std::string_view tail);

  std::size_t entity_count() const noexcept { return entities_.size(); }
  std::size_t relation_count() const noexcept { return relations_.size(); }
  std::size_t triple_count() const noexcept { return triples_.size(); }
  bool empty() const noexcept { return triples_.empty(); }

  const std::string& entity_label(EntityId id) const { return entities_.at(id); }
  const std::string& relation_label(RelationId id) const { return relations_.at(id); }

  std::optional<EntityId> find_entity(std::string_view label) const;
  std::optional<RelationId> find_relation(std::string_view label) const;
  bool contains(const Triple& t) const { return seen_.contains(t); }

  std::span<const Triple> triples() const noexcept { return triples_; }
  const Triple& triple(std::size_t index) const { return triples_.at(index); }

  /// Indices into triples() of edges leaving / entering an entity.
  std::span<const std::uint32_t> outgoing(EntityId id) const { return out_.at(id); }
  std::span<const std::uint32_t> incoming(EntityId id) const { return in_.at(id); }

 private:
  EntityId intern_entity(std::string_view label);
  RelationId intern_relation(std::string_view label);

  std::vector<std::string> entities_;
  std::vector<std::string> relations_;
  std::unordered_map<std::string, EntityId> entity_index_;
  std::unordered_map<std::string, RelationId> relation_index_;
  std::vector<Triple> triples_;
  std::unordered_set<Triple, TripleHash> seen_;
  std::vector<std::vector<std::uint32_t>> out_;
  std::vector<std::vector<std::uint32_t>> in_;
};

/// Parses tab-separated `head<TAB>relation<TAB>tail` lines. Blank lines and
/// lines starting with `#` are skipped. Throws ParseError on arity or empty
/// field violations.
TripleStore load_triples(std::istream& in);
TripleStore load_triples_file(const std::filesystem::path& path);

/// Undirected hop distance of every triple from the nearest source: a triple
/// whose nearer endpoint is d steps away has distance d + 1. Triples farther
/// than `max_hops` get -1.
std::vector<int> triple_hop_distances(const TripleStore& store,
                                      std::span<const EntityId> sources,
                                      int max_hops);

/// All triples within `hops` undirected steps of any query entity, as a new
/// store (triples kept in source order).
///
/// Throws LookupError for a query entity missing from the store and
/// ConfigError for hops < 1.
TripleStore extract_subgraph(const TripleStore& store,
                             std::span<const std::string> query_entities,
                             int hops);

}  // namespace pathpool
