#include "pathpool/scorer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>

#include <spdlog/spdlog.h>

#include "pathpool/error.hpp"

namespace pathpool {

namespace {

constexpr double kExcluded = -std::numeric_limits<double>::infinity();

double parse_double(std::string_view text, std::size_t line_no) {
  std::string buf(text);
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size() || !std::isfinite(v)) {
    throw ParseError(line_no, "invalid number '" + buf + "'");
  }
  return v;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  while (true) {
    const auto tab = line.find('\t');
    fields.push_back(line.substr(0, tab));
    if (tab == std::string_view::npos) break;
    line.remove_prefix(tab + 1);
  }
  return fields;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

}  // namespace

std::vector<double> UniformScorer::score(const QueryRecord&,
                                         const TripleStore& candidates) const {
  return std::vector<double>(candidates.triple_count(), 1.0);
}

// --- EmbeddingTable ---------------------------------------------------------

void EmbeddingTable::insert(std::string label, std::vector<double> vector) {
  if (vector.empty()) throw Error("embedding for '" + label + "' is empty");
  if (dimension_ == 0) dimension_ = vector.size();
  if (vector.size() != dimension_) {
    throw Error("embedding for '" + label + "' has dimension " + std::to_string(vector.size()) +
                ", expected " + std::to_string(dimension_));
  }
  vectors_[std::move(label)] = std::move(vector);
}

const std::vector<double>* EmbeddingTable::find(const std::string& label) const {
  auto it = vectors_.find(label);
  return it == vectors_.end() ? nullptr : &it->second;
}

EmbeddingTable EmbeddingTable::load(std::istream& in) {
  EmbeddingTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw ParseError(line_no, "expected label<TAB>components");
    }
    std::vector<double> vec;
    std::istringstream components(line.substr(tab + 1));
    std::string token;
    while (components >> token) vec.push_back(parse_double(token, line_no));
    if (vec.empty()) throw ParseError(line_no, "embedding has no components");
    if (table.dimension_ != 0 && vec.size() != table.dimension_) {
      throw ParseError(line_no, "embedding dimension " + std::to_string(vec.size()) +
                                    " differs from " + std::to_string(table.dimension_));
    }
    table.insert(line.substr(0, tab), std::move(vec));
  }
  return table;
}

EmbeddingTable EmbeddingTable::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open embedding file " + path.string());
  return load(in);
}

// --- CosineScorer -----------------------------------------------------------

std::string triple_text(std::string_view head, std::string_view relation,
                        std::string_view tail) {
  std::string rel(relation);
  std::replace(rel.begin(), rel.end(), '.', ' ');
  std::replace(rel.begin(), rel.end(), '_', ' ');
  std::string out;
  out.reserve(head.size() + rel.size() + tail.size() + 2);
  out.append(head).append(" ").append(rel).append(" ").append(tail);
  return out;
}

std::vector<double> CosineScorer::triple_vector(const TripleStore& store, const Triple& t) const {
  const auto& head = store.entity_label(t.head);
  const auto& relation = store.relation_label(t.relation);
  const auto& tail = store.entity_label(t.tail);
  if (const auto* whole = table_.find(triple_text(head, relation, tail))) return *whole;

  std::vector<double> sum(table_.dimension(), 0.0);
  for (const std::string* label : {&head, &relation, &tail}) {
    const auto* v = table_.find(*label);
    if (!v) throw ScoringError("no embedding for label '" + *label + "'");
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += (*v)[i];
  }
  return sum;
}

std::vector<double> CosineScorer::score(const QueryRecord& query,
                                        const TripleStore& candidates) const {
  const auto* q = table_.find(query.question);
  if (!q) throw ScoringError("no embedding for label '" + query.question + "'");
  std::vector<double> scores;
  scores.reserve(candidates.triple_count());
  for (const auto& t : candidates.triples()) scores.push_back(cosine(*q, triple_vector(candidates, t)));
  return scores;
}

// --- PrecomputedScorer ------------------------------------------------------

void PrecomputedScorer::set(std::string query_id, std::string head, std::string relation,
                            std::string tail, double score) {
  scores_[std::move(query_id)][Key{std::move(head), std::move(relation), std::move(tail)}] = score;
}

PrecomputedScorer PrecomputedScorer::load(std::istream& in) {
  PrecomputedScorer scorer;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 5) {
      throw ParseError(line_no, "expected query_id, head, relation, tail, score");
    }
    for (const auto& f : fields) {
      if (f.empty()) throw ParseError(line_no, "empty field");
    }
    scorer.set(std::string(fields[0]), std::string(fields[1]), std::string(fields[2]),
               std::string(fields[3]), parse_double(fields[4], line_no));
  }
  return scorer;
}

PrecomputedScorer PrecomputedScorer::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open score file " + path.string());
  return load(in);
}

std::vector<double> PrecomputedScorer::score(const QueryRecord& query,
                                             const TripleStore& candidates) const {
  std::vector<double> scores(candidates.triple_count(), kExcluded);
  auto per_query = scores_.find(query.id);
  std::size_t missing = 0;
  for (std::size_t i = 0; i < candidates.triple_count(); ++i) {
    const auto& t = candidates.triple(i);
    if (per_query != scores_.end()) {
      auto it = per_query->second.find(Key{candidates.entity_label(t.head),
                                           candidates.relation_label(t.relation),
                                           candidates.entity_label(t.tail)});
      if (it != per_query->second.end()) {
        scores[i] = it->second;
        continue;
      }
    }
    ++missing;
  }
  if (missing > 0) {
    spdlog::debug("query '{}': {} of {} candidates have no precomputed score; excluded",
                  query.id, missing, candidates.triple_count());
  }
  return scores;
}

// --- factory & ranking ------------------------------------------------------

std::unique_ptr<Scorer> make_scorer(std::string_view spec) {
  if (spec == "uniform") return std::make_unique<UniformScorer>();
  const auto colon = spec.find(':');
  const auto kind = spec.substr(0, colon);
  const auto arg = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  if (arg.empty() && (kind == "cosine" || kind == "precomputed")) {
    throw ConfigError("scorer '" + std::string(kind) + "' needs a file: " + std::string(kind) +
                      ":<path>");
  }
  if (kind == "cosine") {
    return std::make_unique<CosineScorer>(EmbeddingTable::load_file(std::filesystem::path(arg)));
  }
  if (kind == "precomputed") {
    return std::make_unique<PrecomputedScorer>(
        PrecomputedScorer::load_file(std::filesystem::path(arg)));
  }
  throw ConfigError("unknown scorer '" + std::string(spec) +
                    "' (expected uniform, cosine:<file> or precomputed:<file>)");
}

TripleSequence score_triples(const QueryRecord& query, const TripleStore& candidates,
                             const Scorer& scorer, std::size_t k) {
  if (k == 0) throw ConfigError("k must be >= 1");
  const auto scores = scorer.score(query, candidates);
  if (scores.size() != candidates.triple_count()) {
    throw ScoringError("scorer '" + scorer.name() + "' returned the wrong number of scores");
  }

  std::vector<std::size_t> order;
  order.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (std::isfinite(scores[i])) order.push_back(i);
  }

  auto labels = [&](std::size_t i) {
    const auto& t = candidates.triple(i);
    return std::tie(candidates.entity_label(t.head), candidates.relation_label(t.relation),
                    candidates.entity_label(t.tail));
  };
  auto better = [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return labels(a) < labels(b);
  };
  const std::size_t keep = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                    better);
  order.resize(keep);

  TripleSequence out;
  out.source = scorer.name();
  out.triples.reserve(keep);
  for (std::size_t rank = 0; rank < keep; ++rank) {
    const auto& t = candidates.triple(order[rank]);
    out.triples.push_back(ScoredTriple{candidates.entity_label(t.head),
                                       candidates.relation_label(t.relation),
                                       candidates.entity_label(t.tail), scores[order[rank]], rank});
  }
  return out;
}

}  // namespace pathpool
