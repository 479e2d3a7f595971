#include "pathpool/selection.hpp"

#include <algorithm>

#include "pathpool/error.hpp"

namespace pathpool {

SelectionMode parse_selection_mode(std::string_view text) {
  if (text == "rerank") return SelectionMode::rerank;
  if (text == "reselect") return SelectionMode::reselect;
  throw ConfigError("unknown selection mode '" + std::string(text) + "'");
}

PromptOrder parse_prompt_order(std::string_view text) {
  if (text == "recency") return PromptOrder::recency;
  if (text == "lost-in-middle" || text == "lost_in_middle") return PromptOrder::lost_in_middle;
  throw ConfigError("unknown prompt order '" + std::string(text) + "'");
}

std::string_view to_string(SelectionMode mode) {
  return mode == SelectionMode::rerank ? "rerank" : "reselect";
}

std::string_view to_string(PromptOrder order) {
  return order == PromptOrder::recency ? "recency" : "lost-in-middle";
}

void SelectionConfig::validate() const {
  if (coarse_k < 1 || fine_k < 1) throw ConfigError("coarse_k and fine_k must be >= 1");
  if (fine_k > coarse_k) throw ConfigError("fine_k must not exceed coarse_k");
}

TripleSequence sort_by_score(TripleSequence sequence) {
  std::stable_sort(sequence.triples.begin(), sequence.triples.end(),
                   [](const ScoredTriple& a, const ScoredTriple& b) {
                     if (a.score != b.score) return a.score > b.score;
                     return a.retrieval_rank < b.retrieval_rank;
                   });
  return sequence;
}

TripleSequence rerank(const TripleSequence& sequence, PromptOrder order,
                      bool lost_in_middle_head_first) {
  TripleSequence ranked = sort_by_score(sequence);
  if (order == PromptOrder::recency) {
    std::reverse(ranked.triples.begin(), ranked.triples.end());
    return ranked;
  }

  const auto n = ranked.size();
  std::vector<ScoredTriple> placed(n);
  std::size_t head = 0;
  std::size_t tail = n;
  for (std::size_t i = 0; i < n; ++i) {
    const bool to_head = (i % 2 == 0) == lost_in_middle_head_first;
    if (to_head) placed[head++] = std::move(ranked.triples[i]);
    else placed[--tail] = std::move(ranked.triples[i]);
  }
  ranked.triples = std::move(placed);
  return ranked;
}

TripleSequence reselect(const TripleSequence& sequence, std::size_t fine_k, PromptOrder order,
                        bool lost_in_middle_head_first) {
  if (fine_k < 1) throw ConfigError("fine_k must be >= 1");
  TripleSequence top = sort_by_score(sequence);
  if (top.size() > fine_k) top.triples.resize(fine_k);
  return rerank(top, order, lost_in_middle_head_first);
}

TripleSequence select(const TripleSequence& smoothed, const SelectionConfig& config) {
  config.validate();
  if (config.mode == SelectionMode::rerank) {
    return rerank(smoothed, config.order, config.lost_in_middle_head_first);
  }
  return reselect(smoothed, config.fine_k, config.order, config.lost_in_middle_head_first);
}

}  // namespace pathpool
