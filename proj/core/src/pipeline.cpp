#include "pathpool/pipeline.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include <spdlog/spdlog.h>

#include "json.hpp"
#include "pathpool/error.hpp"
#include "pathpool/sequence_io.hpp"

namespace pathpool {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void require_file(const fs::path& path, const char* what) {
  if (path.empty()) throw ConfigError(std::string(what) + " path is not set");
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    throw ConfigError(std::string(what) + " '" + path.string() + "' does not exist");
  }
}

std::string scorer_file(const std::string& spec) {
  const auto colon = spec.find(':');
  return colon == std::string::npos ? std::string{} : spec.substr(colon + 1);
}

json outcome_result(const QueryOutcome& o) {
  json r = {{"id", o.query_id}, {"prompt_hash", o.prompt_hash}, {"predictions", o.predictions}};
  if (o.eval) {
    r["hit"] = o.eval->hit ? 1 : 0;
    r["any_hit"] = o.eval->any_hit ? 1 : 0;
    r["precision"] = o.eval->precision;
    r["recall"] = o.eval->recall;
    r["f1"] = o.eval->f1;
  }
  if (o.error) r["error"] = *o.error;
  return r;
}

RunSummary summarize(std::vector<QueryOutcome> outcomes) {
  RunSummary summary;
  std::vector<EvalResult> evaluated;
  for (const auto& o : outcomes) {
    if (o.error) ++summary.failed;
    if (o.eval) evaluated.push_back(*o.eval);
  }
  if (!evaluated.empty()) summary.metrics = aggregate(evaluated);
  summary.outcomes = std::move(outcomes);
  return summary;
}

}  // namespace

void PipelineConfig::validate() const {
  require_file(kg_path, "KG file");
  require_file(queries_path, "query file");
  if (scorer != "uniform") {
    const auto file = scorer_file(scorer);
    if (file.empty()) throw ConfigError("scorer '" + scorer + "' needs a file argument");
    require_file(file, "scorer file");
  }
  if (hops < 1) throw ConfigError("hops must be >= 1");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  if (output_dir.empty()) throw ConfigError("output directory is not set");
  std::error_code ec;
  if (fs::exists(output_dir, ec) && !fs::is_directory(output_dir, ec)) {
    throw ConfigError("output path '" + output_dir.string() + "' is not a directory");
  }
  pooling.validate();
  selection.validate();
  if (!no_llm) generation.validate();
}

std::size_t PipelineConfig::retrieval_k() const {
  if (!baseline && selection.mode == SelectionMode::reselect) return selection.coarse_k;
  return selection.fine_k;
}

TripleSequence retrieve(const QueryRecord& query, const TripleStore& kg, const Scorer& scorer,
                        int hops, std::size_t k) {
  const auto candidates = extract_subgraph(kg, query.query_entities, hops);
  return score_triples(query, candidates, scorer, k);
}

TripleSequence refine(const QueryRecord& query, const TripleSequence& retrieved,
                      const PipelineConfig& config) {
  if (config.baseline) {
    TripleSequence top = sort_by_score(retrieved);
    if (top.size() > config.selection.fine_k) top.triples.resize(config.selection.fine_k);
    top.source = retrieved.source;
    return top;
  }
  const auto smoothed = smooth(retrieved, query.query_entities, config.pooling);
  auto selected = select(smoothed, config.selection);
  selected.source = smoothed.source + "+" + std::string(to_string(config.selection.mode)) + ":" +
                    std::string(to_string(config.selection.order));
  return selected;
}

QueryOutcome process_query(const QueryRecord& query, const TripleStore& kg, const Scorer& scorer,
                           const PipelineConfig& config, ChatTransport* transport) {
  QueryOutcome o;
  o.query_id = query.id;
  try {
    o.retrieved = retrieve(query, kg, scorer, config.hops, config.retrieval_k());
    o.final_sequence = refine(query, o.retrieved, config);
    o.prompt = assemble_prompt(query, o.final_sequence);
    o.prompt_hash = prompt_hash(o.prompt);
    if (config.no_llm) return o;
    if (!transport) throw ConfigError("no LLM transport configured");
    o.completion = call_llm(o.prompt, config.generation, *transport);
    o.predictions = parse_answers(*o.completion);
    if (!query.gold_answers.empty()) o.eval = evaluate(o.predictions, query.gold_answers);
  } catch (const std::exception& e) {
    o.error = e.what();
    spdlog::warn("query '{}': {}", query.id, e.what());
  }
  return o;
}

RunSummary run_pipeline(const PipelineConfig& config, ChatTransport* transport) {
  config.validate();
  const auto kg = load_triples_file(config.kg_path);
  const auto queries = load_queries_file(config.queries_path);
  const auto scorer = make_scorer(config.scorer);

  HttpChatTransport http;
  if (!config.no_llm && !transport) transport = &http;

  std::vector<QueryOutcome> outcomes(queries.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (auto i = next.fetch_add(1); i < queries.size(); i = next.fetch_add(1)) {
      outcomes[i] = process_query(queries[i], kg, *scorer, config, transport);
    }
  };
  {
    const auto n = std::min(config.jobs, std::max<std::size_t>(queries.size(), 1));
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < n; ++w) pool.emplace_back(worker);
    worker();
  }

  auto summary = summarize(std::move(outcomes));

  fs::create_directories(config.output_dir);
  std::vector<QuerySequence> selected;
  for (const auto& o : summary.outcomes) {
    if (!o.error || !o.final_sequence.empty()) selected.push_back({o.query_id, o.final_sequence});
  }
  std::ostringstream seq_out;
  write_sequences(seq_out, selected);
  write_file_atomic(config.output_dir / "selected.jsonl", seq_out.str());
  write_prompts(config.output_dir / "prompts.jsonl", summary.outcomes);
  if (!config.no_llm) {
    write_completions(config.output_dir / "completions.jsonl", summary.outcomes);
    write_results(config.output_dir / "results.jsonl", summary.outcomes);
    write_metrics(config.output_dir / "metrics.json", summary);
  }
  return summary;
}

RunSummary evaluate_completions(std::span<const QueryRecord> queries,
                                const std::map<std::string, std::string>& completions) {
  std::vector<QueryOutcome> outcomes;
  outcomes.reserve(queries.size());
  for (const auto& q : queries) {
    QueryOutcome o;
    o.query_id = q.id;
    auto it = completions.find(q.id);
    if (it == completions.end()) {
      o.error = "no completion for query";
    } else {
      o.completion = it->second;
      o.predictions = parse_answers(it->second);
      try {
        o.eval = evaluate(o.predictions, q.gold_answers);
      } catch (const Error& e) {
        o.error = e.what();
      }
    }
    outcomes.push_back(std::move(o));
  }
  return summarize(std::move(outcomes));
}

std::map<std::string, std::string> read_completions_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open completions file " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto record = json::parse(line);
      if (record.contains("completion") && record["completion"].is_string()) {
        out[record.at("id").get<std::string>()] = record["completion"].get<std::string>();
      }
    } catch (const json::exception& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return out;
}

void write_prompts(const fs::path& path, std::span<const QueryOutcome> outcomes) {
  std::ostringstream out;
  for (const auto& o : outcomes) {
    json messages = json::array();
    if (!o.prompt_hash.empty()) {
      for (const auto& m : to_messages(o.prompt)) {
        messages.push_back({{"role", m.role}, {"content", m.content}});
      }
    }
    json triples = json::array();
    for (const auto& t : o.final_sequence) triples.push_back(render_triple(t));
    json record = {{"id", o.query_id},
                   {"prompt_hash", o.prompt_hash},
                   {"triples", triples},
                   {"messages", messages}};
    if (o.error) record["error"] = *o.error;
    out << record.dump() << '\n';
  }
  write_file_atomic(path, out.str());
}

void write_completions(const fs::path& path, std::span<const QueryOutcome> outcomes) {
  std::ostringstream out;
  for (const auto& o : outcomes) {
    json record = {{"id", o.query_id}};
    if (o.completion) record["completion"] = *o.completion;
    if (o.error) record["error"] = *o.error;
    out << record.dump() << '\n';
  }
  write_file_atomic(path, out.str());
}

void write_results(const fs::path& path, std::span<const QueryOutcome> outcomes) {
  std::ostringstream out;
  for (const auto& o : outcomes) out << outcome_result(o).dump() << '\n';
  write_file_atomic(path, out.str());
}

void write_metrics(const fs::path& path, const RunSummary& summary) {
  json m = {{"queries", summary.outcomes.size()}, {"failed", summary.failed}};
  if (summary.metrics) {
    m["evaluated"] = summary.metrics->query_count;
    m["hit_at_1"] = summary.metrics->hit_at_1;
    m["macro_f1"] = summary.metrics->macro_f1;
    m["any_hit"] = summary.metrics->any_hit;
  } else {
    m["evaluated"] = 0;
  }
  write_file_atomic(path, m.dump(2) + "\n");
}

}  // namespace pathpool
