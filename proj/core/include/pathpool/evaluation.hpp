#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pathpool {

/// Lines whose first non-blank characters are `ans:` (any case), trimmed,
/// in order. Answers whose normalized forms collide keep the first one.
std::vector<std::string> parse_answers(std::string_view completion);

/// Lowercase, trim, collapse inner whitespace, strip leading and trailing
/// punctuation.
std::string normalize_answer(std::string_view answer);

struct EvalResult {
  bool hit = false;
  /// Any prediction (not only the first) matches a gold answer.
  bool any_hit = false;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Per-query metrics over normalized, deduplicated answer sets. The hit
/// uses the first prediction only. Throws ConfigError for empty gold.
EvalResult evaluate(std::span<const std::string> predictions,
                    std::span<const std::string> gold);

struct EvalSummary {
  std::size_t query_count = 0;
  double hit_at_1 = 0.0;
  double macro_f1 = 0.0;
  double any_hit = 0.0;
};

/// Arithmetic means of the per-query values.
EvalSummary aggregate(std::span<const EvalResult> results);

}  // namespace pathpool
