#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pathpool/evaluation.hpp"
#include "pathpool/llm_client.hpp"
#include "pathpool/path_pooling.hpp"
#include "pathpool/prompt.hpp"
#include "pathpool/query.hpp"
#include "pathpool/scorer.hpp"
#include "pathpool/selection.hpp"
#include "pathpool/triple_sequence.hpp"
#include "pathpool/triple_store.hpp"

namespace pathpool {

struct PipelineConfig {
  std::filesystem::path kg_path;
  std::filesystem::path queries_path;
  /// See make_scorer().
  std::string scorer = "uniform";
  /// Radius of the query-centred subgraph.
  int hops = 4;
  PoolingConfig pooling;
  SelectionConfig selection;
  GenerationConfig generation;
  /// Skip path pooling; the prompt gets the top fine_k triples by
  /// retrieval score, descending.
  bool baseline = false;
  /// Stop after prompt assembly.
  bool no_llm = false;
  std::size_t jobs = 1;
  std::filesystem::path output_dir;

  /// Checks files, numeric ranges and sub-configs. Throws ConfigError.
  void validate() const;

  /// Triples retrieved per query: coarse_k when reselecting, fine_k otherwise.
  std::size_t retrieval_k() const;
};

struct QueryOutcome {
  std::string query_id;
  /// Set when a stage failed; later fields are then partial.
  std::optional<std::string> error;
  TripleSequence retrieved;
  TripleSequence final_sequence;
  PromptBundle prompt;
  std::string prompt_hash;
  std::optional<std::string> completion;
  std::vector<std::string> predictions;
  std::optional<EvalResult> eval;
};

struct RunSummary {
  std::vector<QueryOutcome> outcomes;
  /// Present when at least one query was evaluated.
  std::optional<EvalSummary> metrics;
  std::size_t failed = 0;
};

/// Subgraph extraction followed by top-k scoring.
TripleSequence retrieve(const QueryRecord& query, const TripleStore& kg, const Scorer& scorer,
                        int hops, std::size_t k);

/// Smooth + select, or the descending top fine_k for a baseline run.
TripleSequence refine(const QueryRecord& query, const TripleSequence& retrieved,
                      const PipelineConfig& config);

/// All stages for one query. Stage errors are captured in the outcome.
/// `transport` may be null only when config.no_llm is set.
QueryOutcome process_query(const QueryRecord& query, const TripleStore& kg,
                           const Scorer& scorer, const PipelineConfig& config,
                           ChatTransport* transport);

/// Validates the config, loads inputs, processes queries on `config.jobs`
/// workers and writes prompts.jsonl, completions.jsonl, results.jsonl and
/// metrics.json into the output directory. Configuration and IO failures
/// throw before anything is written.
RunSummary run_pipeline(const PipelineConfig& config, ChatTransport* transport = nullptr);

/// Evaluates already collected completions (query id -> text).
RunSummary evaluate_completions(std::span<const QueryRecord> queries,
                                const std::map<std::string, std::string>& completions);

std::map<std::string, std::string> read_completions_file(const std::filesystem::path& path);

void write_prompts(const std::filesystem::path& path, std::span<const QueryOutcome> outcomes);
void write_completions(const std::filesystem::path& path, std::span<const QueryOutcome> outcomes);
void write_results(const std::filesystem::path& path, std::span<const QueryOutcome> outcomes);
void write_metrics(const std::filesystem::path& path, const RunSummary& summary);

}  // namespace pathpool
