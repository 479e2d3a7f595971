#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "pathpool/query.hpp"
#include "pathpool/triple_sequence.hpp"
#include "pathpool/triple_store.hpp"

namespace pathpool {

/// Query-relevance scorer for candidate triples. Implementations are
/// immutable after construction and may be shared across threads.
class Scorer {
 public:
  virtual ~Scorer() = default;

  virtual std::string name() const = 0;

  /// One score per candidate triple, in `candidates.triples()` order. A
  /// non-finite score excludes the triple from retrieval.
  virtual std::vector<double> score(const QueryRecord& query,
                                    const TripleStore& candidates) const = 0;
};

/// Every triple scores 1.0.
class UniformScorer final : public Scorer {
 public:
  std::string name() const override { return "uniform"; }
  std::vector<double> score(const QueryRecord& query,
                            const TripleStore& candidates) const override;
};

/// Dense vectors keyed by text. All vectors share one dimension.
class EmbeddingTable {
 public:
  /// Lines of `label<TAB>c1 c2 ... cn`.
  static EmbeddingTable load(std::istream& in);
  static EmbeddingTable load_file(const std::filesystem::path& path);

  void insert(std::string label, std::vector<double> vector);
  const std::vector<double>* find(const std::string& label) const;
  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return vectors_.size(); }

 private:
  std::unordered_map<std::string, std::vector<double>> vectors_;
  std::size_t dimension_ = 0;
};

/// `"{head} {relation} {tail}"` with dots and underscores in the relation
/// replaced by spaces.
std::string triple_text(std::string_view head, std::string_view relation,
                        std::string_view tail);

/// Cosine similarity between the question embedding and each triple
/// embedding.
///
/// The question is looked up by its exact text. A triple is looked up by
/// triple_text(); failing that, its vector is the sum of the head, relation
/// and tail label vectors. A missing label is a ScoringError.
class CosineScorer final : public Scorer {
 public:
  explicit CosineScorer(EmbeddingTable table) : table_(std::move(table)) {}

  std::string name() const override { return "cosine"; }
  std::vector<double> score(const QueryRecord& query,
                            const TripleStore& candidates) const override;

 private:
  std::vector<double> triple_vector(const TripleStore& store, const Triple& t) const;

  EmbeddingTable table_;
};

/// Replays scores from `query_id<TAB>head<TAB>relation<TAB>tail<TAB>score`
/// lines, e.g. the output of an external trained retriever. Missing entries
/// score -inf and are excluded.
class PrecomputedScorer final : public Scorer {
 public:
  static PrecomputedScorer load(std::istream& in);
  static PrecomputedScorer load_file(const std::filesystem::path& path);

  void set(std::string query_id, std::string head, std::string relation,
           std::string tail, double score);

  std::string name() const override { return "precomputed"; }
  std::vector<double> score(const QueryRecord& query,
                            const TripleStore& candidates) const override;

 private:
  using Key = std::tuple<std::string, std::string, std::string>;
  std::map<std::string, std::map<Key, double>> scores_;
};

/// Builds a scorer from `uniform`, `cosine:<embedding file>` or
/// `precomputed:<score file>`.
std::unique_ptr<Scorer> make_scorer(std::string_view spec);

/// Top-k candidates by score, descending. Ties are broken by
/// (head, relation, tail) label order. Non-finite scores are dropped.
TripleSequence score_triples(const QueryRecord& query, const TripleStore& candidates,
                             const Scorer& scorer, std::size_t k);

}  // namespace pathpool
