#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace pathpool {

struct QueryRecord {
  std::string id;
  std::string question;
  std::vector<std::string> query_entities;
  std::vector<std::string> gold_answers;
};

/// Reads one JSON object per line:
///   {"id": "...", "question": "...", "query_entities": [...], "answers": [...]}
///
/// Gold answers are deduplicated by their normalized form. When
/// `require_entities` is true a record without query entities is a
/// ParseError (evaluation-only runs pass false).
std::vector<QueryRecord> load_queries(std::istream& in, bool require_entities = true);
std::vector<QueryRecord> load_queries_file(const std::filesystem::path& path,
                                           bool require_entities = true);

}  // namespace pathpool
