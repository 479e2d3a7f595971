#include "pathpool/sequence_io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <tuple>

#include "json.hpp"
#include "pathpool/error.hpp"

namespace pathpool {

void validate_sequence(const TripleSequence& sequence) {
  std::set<std::tuple<const std::string&, const std::string&, const std::string&>> seen;
  for (const auto& t : sequence) {
    if (!std::isfinite(t.score)) {
      throw Error("non-finite score for (" + t.head + ", " + t.relation + ", " + t.tail + ")");
    }
    if (!seen.emplace(t.head, t.relation, t.tail).second) {
      throw Error("duplicate triple (" + t.head + ", " + t.relation + ", " + t.tail + ")");
    }
  }
}

void write_sequences(std::ostream& out, std::span<const QuerySequence> sequences) {
  for (const auto& qs : sequences) {
    nlohmann::json triples = nlohmann::json::array();
    for (const auto& t : qs.sequence) {
      triples.push_back({{"head", t.head},
                         {"relation", t.relation},
                         {"tail", t.tail},
                         {"score", t.score},
                         {"rank", t.retrieval_rank}});
    }
    nlohmann::json record = {
        {"query_id", qs.query_id}, {"source", qs.sequence.source}, {"triples", triples}};
    out << record.dump() << '\n';
  }
}

std::vector<QuerySequence> read_sequences(std::istream& in) {
  std::vector<QuerySequence> result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto record = nlohmann::json::parse(line);
      QuerySequence qs;
      qs.query_id = record.at("query_id").get<std::string>();
      qs.sequence.source = record.value("source", std::string{});
      for (const auto& t : record.at("triples")) {
        qs.sequence.triples.push_back(ScoredTriple{
            t.at("head").get<std::string>(), t.at("relation").get<std::string>(),
            t.at("tail").get<std::string>(), t.at("score").get<double>(),
            t.value("rank", qs.sequence.triples.size())});
      }
      result.push_back(std::move(qs));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return result;
}

std::vector<QuerySequence> read_sequences_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open sequence file " + path.string());
  return read_sequences(in);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace pathpool
