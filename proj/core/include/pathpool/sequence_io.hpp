#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pathpool/triple_sequence.hpp"

namespace pathpool {

/// A triple sequence tagged with the query it belongs to; the unit passed
/// between the retrieve, pool, select and prompt stages.
struct QuerySequence {
  std::string query_id;
  TripleSequence sequence;
};

/// JSON lines: {"query_id", "source", "triples": [{"head", "relation",
/// "tail", "score", "rank"}, ...]}. Scores round-trip exactly.
void write_sequences(std::ostream& out, std::span<const QuerySequence> sequences);
std::vector<QuerySequence> read_sequences(std::istream& in);
std::vector<QuerySequence> read_sequences_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace pathpool
