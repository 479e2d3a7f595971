#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pathpool/query.hpp"
#include "pathpool/triple_sequence.hpp"

namespace pathpool {

/// One-shot chat prompt: system text, one worked exemplar, and the final
/// user turn carrying the triplet block and the question.
struct PromptBundle {
  std::string system;
  std::string exemplar_user;
  std::string exemplar_assistant;
  std::string user;
};

struct ChatMessage {
  std::string role;
  std::string content;
};

namespace prompt_template {

extern const std::string_view kSystem;
extern const std::string_view kExemplarQuestion;
extern const std::string_view kExemplarAssistant;

/// Triplets of the exemplar in prompt order.
std::vector<ScoredTriple> exemplar_triples();

}  // namespace prompt_template

/// `({head}, {relation}, {tail})`
std::string render_triple(const ScoredTriple& triple);

/// "Triplets:\n" + one rendered triple per line + "\n\nQuestion:\n" + question.
std::string render_user_turn(const TripleSequence& triples, std::string_view question);

/// Fills the template with `triples` in the given order; no reordering is
/// done here.
PromptBundle assemble_prompt(const QueryRecord& query, const TripleSequence& triples);

/// system, exemplar user, exemplar assistant, user.
std::vector<ChatMessage> to_messages(const PromptBundle& bundle);

/// FNV-1a 64 over the four prompt parts, as 16 lowercase hex digits.
std::string prompt_hash(const PromptBundle& bundle);

}  // namespace pathpool
