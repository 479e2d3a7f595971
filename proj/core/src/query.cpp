#include "pathpool/query.hpp"

#include <fstream>
#include <istream>
#include <unordered_set>

#include "json.hpp"
#include "pathpool/error.hpp"
#include "pathpool/evaluation.hpp"

namespace pathpool {

namespace {

std::vector<std::string> string_list(const nlohmann::json& obj, const char* key,
                                     std::size_t line_no) {
  std::vector<std::string> out;
  auto it = obj.find(key);
  if (it == obj.end()) return out;
  if (!it->is_array()) throw ParseError(line_no, std::string("'") + key + "' must be a list");
  for (const auto& v : *it) {
    if (!v.is_string()) {
      throw ParseError(line_no, std::string("'") + key + "' must contain strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

std::vector<QueryRecord> load_queries(std::istream& in, bool require_entities) {
  std::vector<QueryRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(line_no, e.what());
    }
    if (!obj.is_object()) throw ParseError(line_no, "query record must be a JSON object");

    QueryRecord q;
    if (!obj.contains("id") || !obj["id"].is_string()) {
      throw ParseError(line_no, "missing string field 'id'");
    }
    q.id = obj["id"].get<std::string>();
    if (obj.contains("question") && obj["question"].is_string()) {
      q.question = obj["question"].get<std::string>();
    }
    if (q.question.empty()) throw ParseError(line_no, "question must be non-empty");
    q.query_entities = string_list(obj, "query_entities", line_no);
    if (require_entities && q.query_entities.empty()) {
      throw ParseError(line_no, "query '" + q.id + "' has no query entities");
    }

    std::unordered_set<std::string> seen;
    for (auto& answer : string_list(obj, "answers", line_no)) {
      if (seen.insert(normalize_answer(answer)).second) q.gold_answers.push_back(std::move(answer));
    }
    records.push_back(std::move(q));
  }
  return records;
}

std::vector<QueryRecord> load_queries_file(const std::filesystem::path& path,
                                           bool require_entities) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open query file " + path.string());
  return load_queries(in, require_entities);
}

}  // namespace pathpool
