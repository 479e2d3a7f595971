#include "pathpool/evaluation.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "pathpool/error.hpp"

namespace pathpool {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::unordered_set<std::string> normalized_set(std::span<const std::string> answers) {
  std::unordered_set<std::string> out;
  for (const auto& a : answers) {
    auto n = normalize_answer(a);
    if (!n.empty()) out.insert(std::move(n));
  }
  return out;
}

}  // namespace

std::string normalize_answer(std::string_view answer) {
  std::string collapsed;
  collapsed.reserve(answer.size());
  bool pending_space = false;
  for (char c : trim(answer)) {
    if (is_space(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space) collapsed.push_back(' ');
    pending_space = false;
    collapsed.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }

  std::string_view view = collapsed;
  while (true) {
    const auto before = view.size();
    while (!view.empty() && is_punct(view.front())) view.remove_prefix(1);
    while (!view.empty() && is_punct(view.back())) view.remove_suffix(1);
    view = trim(view);
    if (view.size() == before) break;
  }
  return std::string(view);
}

std::vector<std::string> parse_answers(std::string_view completion) {
  std::vector<std::string> answers;
  std::unordered_set<std::string> seen;
  while (!completion.empty()) {
    const auto nl = completion.find('\n');
    std::string_view line = completion.substr(0, nl);
    completion = nl == std::string_view::npos ? std::string_view{} : completion.substr(nl + 1);

    line = trim(line);
    if (line.size() < 4) continue;
    const bool prefixed = std::equal(line.begin(), line.begin() + 4, "ans:",
                                     [](char a, char b) {
                                       return std::tolower(static_cast<unsigned char>(a)) == b;
                                     });
    if (!prefixed) continue;
    const auto answer = trim(line.substr(4));
    if (answer.empty()) continue;
    if (seen.insert(normalize_answer(answer)).second) answers.emplace_back(answer);
  }
  return answers;
}

EvalResult evaluate(std::span<const std::string> predictions, std::span<const std::string> gold) {
  const auto gold_set = normalized_set(gold);
  if (gold_set.empty()) throw ConfigError("evaluation needs at least one gold answer");
  const auto pred_set = normalized_set(predictions);

  EvalResult r;
  if (!predictions.empty()) r.hit = gold_set.contains(normalize_answer(predictions.front()));

  std::size_t overlap = 0;
  for (const auto& p : pred_set) overlap += gold_set.contains(p) ? 1 : 0;
  r.any_hit = overlap > 0;
  r.precision = pred_set.empty() ? 0.0 : static_cast<double>(overlap) / pred_set.size();
  r.recall = static_cast<double>(overlap) / gold_set.size();
  const double denom = r.precision + r.recall;
  r.f1 = denom == 0.0 ? 0.0 : 2.0 * r.precision * r.recall / denom;
  return r;
}

EvalSummary aggregate(std::span<const EvalResult> results) {
  EvalSummary s;
  s.query_count = results.size();
  if (results.empty()) return s;
  for (const auto& r : results) {
    s.hit_at_1 += r.hit ? 1.0 : 0.0;
    s.macro_f1 += r.f1;
    s.any_hit += r.any_hit ? 1.0 : 0.0;
  }
  const auto n = static_cast<double>(results.size());
  s.hit_at_1 /= n;
  s.macro_f1 /= n;
  s.any_hit /= n;
  return s;
}

}  // namespace pathpool
