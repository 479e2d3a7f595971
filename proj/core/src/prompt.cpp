#include "pathpool/prompt.hpp"

#include <array>
#include <cstdio>

#include <spdlog/spdlog.h>

namespace pathpool {

namespace prompt_template {

const std::string_view kSystem =
    "Based on the triplets retrieved from a knowledge graph, please answer the question. "
    "Please return formatted answers as a list, each prefixed with \"ans:\".";

const std::string_view kExemplarQuestion =
    "What year did the team with mascot named Lou Seal win the World Series?";

const std::string_view kExemplarAssistant =
    "To find the year the team with mascot named Lou Seal won the World Series, we need to "
    "find the team with mascot named Lou Seal and then find the year they won the World "
    "Series. From the triplets, we can see that Lou Seal is the mascot of the San Francisco "
    "Giants. Now, we need to find the year the San Francisco Giants won the World Series. "
    "From the triplets, we can see that San Francisco Giants won the 2010 World Series and "
    "2012 World Series and 2014 World Series. So, the team with mascot named Lou Seal (San "
    "Francisco Giants) won the World Series in 2010, 2012, and 2014. Therefore, the "
    "formatted answers are:\n"
    "ans: 2014 World Series\n"
    "ans: 2012 World Series\n"
    "ans: 2010 World Series";

std::vector<ScoredTriple> exemplar_triples() {
  static constexpr std::array<std::array<const char*, 3>, 15> kTriples = {{
      {"m.011zsc4_", "organization.leadership.organization", "San Francisco Giants"},
      {"m.0crtd80", "sports.sports_league_participation.league", "National League West"},
      {"San Francisco Giants", "time.participant.event", "2014 Major League Baseball season"},
      {"San Francisco Giants", "time.participant.event", "2012 Major League Baseball season"},
      {"AT&T Park", "location.location.events", "2010 World Series"},
      {"San Francisco Giants", "sports.professional_sports_team.owner_s", "Bill Neukom"},
      {"San Francisco Giants", "time.participant.event", "2010 Major League Baseball season"},
      {"San Francisco Giants", "sports.sports_team.championships", "2010 World Series"},
      {"San Francisco Giants", "time.participant.event", "2012 World Series"},
      {"Crazy Crab", "sports.mascot.team", "San Francisco Giants"},
      {"San Francisco Giants", "time.participant.event", "2010 World Series"},
      {"San Francisco Giants", "sports.sports_team.championships", "2012 World Series"},
      {"San Francisco Giants", "sports.sports_team.team_mascot", "Crazy Crab"},
      {"San Francisco Giants", "sports.sports_team.championships", "2014 World Series"},
      {"Lou Seal", "sports.mascot.team", "San Francisco Giants"},
  }};
  std::vector<ScoredTriple> out;
  out.reserve(kTriples.size());
  for (std::size_t i = 0; i < kTriples.size(); ++i) {
    out.push_back(ScoredTriple{kTriples[i][0], kTriples[i][1], kTriples[i][2], 0.0, i});
  }
  return out;
}

}  // namespace prompt_template

std::string render_triple(const ScoredTriple& triple) {
  std::string out;
  out.reserve(triple.head.size() + triple.relation.size() + triple.tail.size() + 6);
  out.append("(").append(triple.head).append(", ").append(triple.relation).append(", ");
  out.append(triple.tail).append(")");
  return out;
}

std::string render_user_turn(const TripleSequence& triples, std::string_view question) {
  std::string out = "Triplets:\n";
  for (std::size_t i = 0; i < triples.size(); ++i) {
    if (i > 0) out.push_back('\n');
    out += render_triple(triples[i]);
  }
  out += "\n\nQuestion:\n";
  out += question;
  return out;
}

PromptBundle assemble_prompt(const QueryRecord& query, const TripleSequence& triples) {
  static const std::string exemplar_user = [] {
    TripleSequence seq;
    seq.triples = prompt_template::exemplar_triples();
    return render_user_turn(seq, prompt_template::kExemplarQuestion);
  }();
  if (triples.empty()) spdlog::warn("query '{}': prompt has an empty triplet block", query.id);
  return PromptBundle{std::string(prompt_template::kSystem), exemplar_user,
                      std::string(prompt_template::kExemplarAssistant),
                      render_user_turn(triples, query.question)};
}

std::vector<ChatMessage> to_messages(const PromptBundle& bundle) {
  return {{"system", bundle.system},
          {"user", bundle.exemplar_user},
          {"assistant", bundle.exemplar_assistant},
          {"user", bundle.user}};
}

std::string prompt_hash(const PromptBundle& bundle) {
  std::uint64_t h = 1469598103934665603ULL;
  auto feed = [&h](std::string_view part) {
    for (unsigned char c : part) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    h ^= 0x1f;
    h *= 1099511628211ULL;
  };
  feed(bundle.system);
  feed(bundle.exemplar_user);
  feed(bundle.exemplar_assistant);
  feed(bundle.user);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace pathpool
