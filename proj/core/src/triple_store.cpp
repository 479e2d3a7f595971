#include "pathpool/triple_store.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <istream>

#include "pathpool/error.hpp"

namespace pathpool {

EntityId TripleStore::intern_entity(std::string_view label) {
  auto [it, inserted] = entity_index_.try_emplace(std::string(label),
                                                  static_cast<EntityId>(entities_.size()));
  if (inserted) {
    entities_.emplace_back(label);
    out_.emplace_back();
    in_.emplace_back();
  }
  return it->second;
}

RelationId TripleStore::intern_relation(std::string_view label) {
  auto [it, inserted] = relation_index_.try_emplace(std::string(label),
                                                    static_cast<RelationId>(relations_.size()));
  if (inserted) relations_.emplace_back(label);
  return it->second;
}

bool TripleStore::add(std::string_view head, std::string_view relation, std::string_view tail) {
  if (head.empty() || relation.empty() || tail.empty()) {
    throw Error("triple labels must be non-empty");
  }
  const Triple t{intern_entity(head), intern_relation(relation), intern_entity(tail)};
  if (!seen_.insert(t).second) return false;
  const auto index = static_cast<std::uint32_t>(triples_.size());
  triples_.push_back(t);
  out_[t.head].push_back(index);
  in_[t.tail].push_back(index);
  return true;
}

std::optional<EntityId> TripleStore::find_entity(std::string_view label) const {
  auto it = entity_index_.find(std::string(label));
  if (it == entity_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<RelationId> TripleStore::find_relation(std::string_view label) const {
  auto it = relation_index_.find(std::string(label));
  if (it == relation_index_.end()) return std::nullopt;
  return it->second;
}

TripleStore load_triples(std::istream& in) {
  TripleStore store;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;

    const std::string_view view = line;
    const auto first = view.find('\t');
    const auto second = first == std::string_view::npos ? first : view.find('\t', first + 1);
    if (second == std::string_view::npos || view.find('\t', second + 1) != std::string_view::npos) {
      throw ParseError(line_no, "expected 3 tab-separated fields (head, relation, tail)");
    }
    const std::string_view fields[3] = {view.substr(0, first),
                                        view.substr(first + 1, second - first - 1),
                                        view.substr(second + 1)};
    for (const auto& f : fields) {
      if (f.empty()) throw ParseError(line_no, "empty field");
    }
    store.add(fields[0], fields[1], fields[2]);
  }
  return store;
}

TripleStore load_triples_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open triple file " + path.string());
  return load_triples(in);
}

std::vector<int> triple_hop_distances(const TripleStore& store,
                                      std::span<const EntityId> sources, int max_hops) {
  std::vector<int> vertex_dist(store.entity_count(), -1);
  std::deque<EntityId> frontier;
  for (EntityId s : sources) {
    if (vertex_dist.at(s) != 0) {
      vertex_dist[s] = 0;
      frontier.push_back(s);
    }
  }
  // Vertices at distance max_hops - 1 still contribute their edges.
  while (!frontier.empty()) {
    const EntityId v = frontier.front();
    frontier.pop_front();
    if (vertex_dist[v] + 1 >= max_hops) continue;
    auto visit = [&](EntityId next) {
      if (vertex_dist[next] < 0) {
        vertex_dist[next] = vertex_dist[v] + 1;
        frontier.push_back(next);
      }
    };
    for (auto e : store.outgoing(v)) visit(store.triple(e).tail);
    for (auto e : store.incoming(v)) visit(store.triple(e).head);
  }

  std::vector<int> result(store.triple_count(), -1);
  for (std::size_t i = 0; i < store.triple_count(); ++i) {
    const auto& t = store.triple(i);
    const int dh = vertex_dist[t.head];
    const int dt = vertex_dist[t.tail];
    int near = -1;
    if (dh >= 0 && dt >= 0) near = std::min(dh, dt);
    else if (dh >= 0) near = dh;
    else if (dt >= 0) near = dt;
    if (near >= 0 && near + 1 <= max_hops) result[i] = near + 1;
  }
  return result;
}

TripleStore extract_subgraph(const TripleStore& store,
                             std::span<const std::string> query_entities, int hops) {
  if (hops < 1) throw ConfigError("hops must be >= 1");
  std::vector<EntityId> sources;
  sources.reserve(query_entities.size());
  for (const auto& label : query_entities) {
    auto id = store.find_entity(label);
    if (!id) throw LookupError("unknown query entity '" + label + "'");
    sources.push_back(*id);
  }

  const auto dist = triple_hop_distances(store, sources, hops);
  TripleStore sub;
  for (std::size_t i = 0; i < store.triple_count(); ++i) {
    if (dist[i] < 0) continue;
    const auto& t = store.triple(i);
    sub.add(store.entity_label(t.head), store.relation_label(t.relation),
            store.entity_label(t.tail));
  }
  return sub;
}

}  // namespace pathpool
