#pragma once

#include <cstddef>
#include <string_view>

#include "pathpool/triple_sequence.hpp"

namespace pathpool {

enum class SelectionMode { rerank, reselect };
enum class PromptOrder { recency, lost_in_middle };

SelectionMode parse_selection_mode(std::string_view text);
/// Accepts `recency` and `lost-in-middle` / `lost_in_middle`.
PromptOrder parse_prompt_order(std::string_view text);
std::string_view to_string(SelectionMode mode);
std::string_view to_string(PromptOrder order);

struct SelectionConfig {
  SelectionMode mode = SelectionMode::rerank;
  PromptOrder order = PromptOrder::recency;
  std::size_t coarse_k = 500;
  std::size_t fine_k = 100;
  /// Lost-in-the-middle placement puts the best triple at the head when
  /// true, at the tail otherwise.
  bool lost_in_middle_head_first = true;

  /// Throws ConfigError.
  void validate() const;
};

/// Descending score, ties by retrieval rank.
TripleSequence sort_by_score(TripleSequence sequence);

/// recency: ascending score so the best triple sits next to the question.
/// lost_in_middle: best triples alternate between head and tail, the
/// weakest end up in the middle.
TripleSequence rerank(const TripleSequence& sequence, PromptOrder order,
                      bool lost_in_middle_head_first = true);

/// Keeps the min(fine_k, n) highest-scoring triples, then reranks them.
TripleSequence reselect(const TripleSequence& sequence, std::size_t fine_k,
                        PromptOrder order, bool lost_in_middle_head_first = true);

/// Dispatches on config.mode.
TripleSequence select(const TripleSequence& smoothed, const SelectionConfig& config);

}  // namespace pathpool
