// pathpool: command-line front end for path-pooled triple retrieval.
//
// Each stage reads and writes JSON-lines files so intermediate results can
// be inspected or swapped out:
//
//   retrieve -> pool -> select -> prompt        (or `run` for all of them)

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "pathpool/bench.hpp"
#include "pathpool/error.hpp"
#include "pathpool/pipeline.hpp"
#include "pathpool/sequence_io.hpp"

namespace fs = std::filesystem;
using namespace pathpool;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

/// Flag values shared by the subcommands, parsed into library configs once
/// CLI11 is done.
struct Options {
  std::string kg;
  std::string queries;
  std::string scorer = "uniform";
  int hops = 4;

  std::string algo = "dijkstra";
  std::string pooling = "avg";
  double a = 10.0;
  std::size_t max_path_len = 4;
  std::size_t walks = 256;
  std::uint64_t seed = 0;

  std::string mode = "rerank";
  std::string order = "recency";
  bool head_first = true;
  std::size_t coarse_k = 500;
  std::size_t fine_k = 100;

  std::string endpoint = "http://localhost:8000/v1/chat/completions";
  std::string model = "default";
  double temperature = 0.0;
  int max_tokens = 4000;
  double timeout = 120.0;
  int retries = 2;

  bool no_llm = false;
  bool baseline = false;
  std::size_t jobs = 1;

  std::string in;
  std::string out;
  std::string completions;

  std::vector<std::size_t> sizes = {25, 50, 100, 200, 500};
  std::vector<std::string> algos = {"dijkstra", "bfs", "random-walk"};
  std::size_t bench_queries = 40;
  std::size_t repeats = 5;
  std::size_t entities = 12000;

  bool verbose = false;

  PoolingConfig pooling_config() const {
    PoolingConfig p;
    p.search = parse_search_algorithm(algo);
    p.pooling = parse_pooling(pooling);
    p.positional_divisor = a;
    p.max_path_len = max_path_len;
    p.walk_count = walks;
    p.rng_seed = seed;
    p.validate();
    return p;
  }

  SelectionConfig selection_config() const {
    SelectionConfig s;
    s.mode = parse_selection_mode(mode);
    s.order = parse_prompt_order(order);
    s.coarse_k = coarse_k;
    s.fine_k = fine_k;
    s.lost_in_middle_head_first = head_first;
    s.validate();
    return s;
  }

  GenerationConfig generation_config() const {
    GenerationConfig g;
    g.endpoint = endpoint;
    g.model = model;
    g.temperature = temperature;
    g.max_tokens = max_tokens;
    g.timeout_seconds = timeout;
    g.retry_count = retries;
    return g;
  }

  PipelineConfig pipeline_config() const {
    PipelineConfig c;
    c.kg_path = kg;
    c.queries_path = queries;
    c.scorer = scorer;
    c.hops = hops;
    c.pooling = pooling_config();
    c.selection = selection_config();
    c.generation = generation_config();
    c.baseline = baseline;
    c.no_llm = no_llm;
    c.jobs = jobs;
    c.output_dir = out;
    return c;
  }
};

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw ConfigError(std::string(what) + " is required");
  if (!fs::is_regular_file(path)) throw ConfigError(std::string(what) + " '" + path + "' does not exist");
}

std::map<std::string, QueryRecord> queries_by_id(const std::string& path) {
  require_file(path, "--queries");
  std::map<std::string, QueryRecord> out;
  for (auto& q : load_queries_file(path)) {
    auto id = q.id;
    out.emplace(std::move(id), std::move(q));
  }
  return out;
}

const QueryRecord& lookup(const std::map<std::string, QueryRecord>& queries, const std::string& id) {
  auto it = queries.find(id);
  if (it == queries.end()) throw LookupError("query '" + id + "' is not in the query file");
  return it->second;
}

std::vector<QuerySequence> read_input(const Options& o) {
  require_file(o.in, "--in");
  return read_sequences_file(o.in);
}

void write_output(const Options& o, std::span<const QuerySequence> sequences) {
  std::ostringstream buf;
  write_sequences(buf, sequences);
  if (o.out.empty() || o.out == "-") {
    std::cout << buf.str();
  } else {
    write_file_atomic(o.out, buf.str());
  }
}

int cmd_load_check(const Options& o) {
  require_file(o.kg, "--kg");
  const auto kg = load_triples_file(o.kg);
  std::cout << "entities:  " << kg.entity_count() << "\n"
            << "relations: " << kg.relation_count() << "\n"
            << "triples:   " << kg.triple_count() << "\n";
  if (o.queries.empty()) return 0;
  require_file(o.queries, "--queries");
  const auto queries = load_queries_file(o.queries);
  std::size_t missing = 0;
  for (const auto& q : queries) {
    for (const auto& e : q.query_entities) {
      if (!kg.find_entity(e)) {
        ++missing;
        std::cout << "query " << q.id << ": unknown entity '" << e << "'\n";
      }
    }
  }
  std::cout << "queries:   " << queries.size() << "\n";
  return missing == 0 ? 0 : kExitRuntime;
}

int cmd_retrieve(const Options& o) {
  auto cfg = o.pipeline_config();
  require_file(o.kg, "--kg");
  require_file(o.queries, "--queries");
  const auto kg = load_triples_file(o.kg);
  const auto queries = load_queries_file(o.queries);
  const auto scorer = make_scorer(o.scorer);
  std::vector<QuerySequence> out;
  int failed = 0;
  for (const auto& q : queries) {
    try {
      auto seq = retrieve(q, kg, *scorer, o.hops, cfg.retrieval_k());
      seq.source = scorer->name();
      out.push_back({q.id, std::move(seq)});
    } catch (const Error& e) {
      ++failed;
      spdlog::warn("query '{}': {}", q.id, e.what());
    }
  }
  write_output(o, out);
  return failed == 0 ? 0 : kExitRuntime;
}

int cmd_pool(const Options& o) {
  const auto cfg = o.pooling_config();
  const auto queries = queries_by_id(o.queries);
  std::vector<QuerySequence> out;
  for (const auto& qs : read_input(o)) {
    if (qs.sequence.empty()) {
      out.push_back(qs);
      continue;
    }
    out.push_back({qs.query_id, smooth(qs.sequence, lookup(queries, qs.query_id).query_entities, cfg)});
  }
  write_output(o, out);
  return 0;
}

int cmd_select(const Options& o) {
  const auto cfg = o.selection_config();
  std::vector<QuerySequence> out;
  for (const auto& qs : read_input(o)) {
    if (o.baseline) {
      auto top = sort_by_score(qs.sequence);
      if (top.size() > cfg.fine_k) top.triples.resize(cfg.fine_k);
      out.push_back({qs.query_id, std::move(top)});
    } else {
      out.push_back({qs.query_id, select(qs.sequence, cfg)});
    }
  }
  write_output(o, out);
  return 0;
}

int cmd_prompt(const Options& o) {
  if (o.out.empty()) throw ConfigError("--out is required");
  const auto queries = queries_by_id(o.queries);
  std::vector<QueryOutcome> outcomes;
  for (const auto& qs : read_input(o)) {
    QueryOutcome outcome;
    outcome.query_id = qs.query_id;
    outcome.final_sequence = qs.sequence;
    outcome.prompt = assemble_prompt(lookup(queries, qs.query_id), qs.sequence);
    outcome.prompt_hash = prompt_hash(outcome.prompt);
    outcomes.push_back(std::move(outcome));
  }
  write_prompts(o.out, outcomes);
  return 0;
}

void print_metrics(const RunSummary& summary) {
  std::cout << "queries: " << summary.outcomes.size() << ", failed: " << summary.failed << "\n";
  if (summary.metrics) {
    std::cout << "hit@1:    " << summary.metrics->hit_at_1 << "\n"
              << "macro-F1: " << summary.metrics->macro_f1 << "\n"
              << "any-hit:  " << summary.metrics->any_hit << "\n";
  }
}

int cmd_run(const Options& o) {
  if (o.out.empty()) throw ConfigError("--out is required");
  const auto summary = run_pipeline(o.pipeline_config());
  print_metrics(summary);
  std::cout << "outputs written to " << o.out << "\n";
  return 0;
}

int cmd_eval(const Options& o) {
  require_file(o.queries, "--queries");
  require_file(o.completions, "--completions");
  const auto queries = load_queries_file(o.queries, false);
  const auto summary = evaluate_completions(queries, read_completions_file(o.completions));
  if (!o.out.empty()) {
    fs::create_directories(o.out);
    write_results(fs::path(o.out) / "results.jsonl", summary.outcomes);
    write_metrics(fs::path(o.out) / "metrics.json", summary);
  }
  print_metrics(summary);
  return 0;
}

int cmd_bench(const Options& o) {
  bench::BenchGrid grid;
  for (const auto& a : o.algos) grid.algorithms.push_back(parse_search_algorithm(a));
  grid.triple_counts = o.sizes;
  if (grid.algorithms.empty() || grid.triple_counts.empty()) throw ConfigError("benchmark grid is empty");

  TripleStore kg;
  if (!o.kg.empty()) {
    require_file(o.kg, "--kg");
    kg = load_triples_file(o.kg);
  } else {
    bench::SyntheticKgConfig kc;
    kc.entity_count = o.entities;
    kc.seed = o.seed;
    kg = bench::make_synthetic_kg(kc);
  }
  bench::WorkloadConfig wc;
  wc.query_count = o.bench_queries;
  wc.triple_count = *std::max_element(grid.triple_counts.begin(), grid.triple_counts.end());
  wc.seed = o.seed;
  const auto workload = bench::make_workload(kg, wc);

  auto base = o.pooling_config();
  const auto report = bench::measure_overhead(workload, grid, base, o.repeats);
  bench::write_text_table(std::cout, report);
  if (!o.out.empty()) {
    fs::create_directories(o.out);
    std::ostringstream table;
    bench::write_text_table(table, report);
    write_file_atomic(fs::path(o.out) / "timing.txt", table.str());
    std::ostringstream tsv;
    bench::write_tsv(tsv, report);
    write_file_atomic(fs::path(o.out) / "timing.tsv", tsv.str());
  }
  return 0;
}

void add_retrieval_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--kg", o.kg, "Knowledge graph, head<TAB>relation<TAB>tail per line");
  cmd->add_option("--queries", o.queries, "Queries, one JSON object per line");
  cmd->add_option("--scorer", o.scorer, "uniform | cosine:FILE | precomputed:FILE")->capture_default_str();
  cmd->add_option("--hops", o.hops, "Subgraph radius around the query entities")->capture_default_str();
}

void add_pooling_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--algo", o.algo, "dijkstra | bfs | random-walk")->capture_default_str();
  cmd->add_option("--pooling", o.pooling, "avg | max")->capture_default_str();
  cmd->add_option("--a", o.a, "Positional divisor")->capture_default_str();
  cmd->add_option("--max-path-len", o.max_path_len, "Longest bfs / random-walk kernel")->capture_default_str();
  cmd->add_option("--walks", o.walks, "Random walks per query entity")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Seed for every random choice")->capture_default_str();
}

void add_selection_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--mode", o.mode, "rerank | reselect")->capture_default_str();
  cmd->add_option("--order", o.order, "recency | lost-in-middle")->capture_default_str();
  cmd->add_option("--coarse-k", o.coarse_k, "Triples retrieved before reselection")->capture_default_str();
  cmd->add_option("--fine-k", o.fine_k, "Triples kept for the prompt")->capture_default_str();
  cmd->add_flag("!--tail-first", o.head_first, "Lost-in-the-middle starts at the tail");
  cmd->add_flag("--baseline", o.baseline, "Skip pooling: top fine-k by retrieval score");
}

void add_generation_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--endpoint", o.endpoint, "Chat-completions URL")->capture_default_str();
  cmd->add_option("--model", o.model, "Model name sent to the endpoint")->capture_default_str();
  cmd->add_option("--temperature", o.temperature)->capture_default_str();
  cmd->add_option("--max-tokens", o.max_tokens)->capture_default_str();
  cmd->add_option("--timeout", o.timeout, "Per-request timeout in seconds")->capture_default_str();
  cmd->add_option("--retries", o.retries, "Retries after a failed request")->capture_default_str();
  cmd->add_flag("--no-llm", o.no_llm, "Stop after writing prompts");
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("pathpool"));
  spdlog::set_pattern("[%l] %v");

  CLI::App app{"Path-pooled triple retrieval for knowledge-graph RAG"};
  app.require_subcommand(1);
  Options o;
  app.add_flag("-v,--verbose", o.verbose, "Debug logging");

  auto* load_check = app.add_subcommand("load-check", "Load a KG (and queries) and report counts");
  load_check->add_option("--kg", o.kg, "Knowledge graph file")->required();
  load_check->add_option("--queries", o.queries, "Query file to check against the KG");

  auto* retrieve_cmd = app.add_subcommand("retrieve", "Score the query subgraph and keep the top-k");
  add_retrieval_flags(retrieve_cmd, o);
  add_selection_flags(retrieve_cmd, o);
  retrieve_cmd->add_option("--out", o.out, "Output sequence file (default stdout)");

  auto* pool_cmd = app.add_subcommand("pool", "Smooth retrieved scores with path pooling");
  pool_cmd->add_option("--in", o.in, "Retrieved sequences")->required();
  pool_cmd->add_option("--queries", o.queries, "Query file (for query entities)")->required();
  add_pooling_flags(pool_cmd, o);
  pool_cmd->add_option("--out", o.out, "Output sequence file (default stdout)");

  auto* select_cmd = app.add_subcommand("select", "Rerank or reselect smoothed sequences");
  select_cmd->add_option("--in", o.in, "Smoothed sequences")->required();
  add_selection_flags(select_cmd, o);
  select_cmd->add_option("--out", o.out, "Output sequence file (default stdout)");

  auto* prompt_cmd = app.add_subcommand("prompt", "Assemble prompts from selected sequences");
  prompt_cmd->add_option("--in", o.in, "Selected sequences")->required();
  prompt_cmd->add_option("--queries", o.queries, "Query file")->required();
  prompt_cmd->add_option("--out", o.out, "Output prompts.jsonl")->required();

  auto* run_cmd = app.add_subcommand("run", "Full pipeline: retrieve, pool, select, prompt, generate, evaluate");
  add_retrieval_flags(run_cmd, o);
  add_pooling_flags(run_cmd, o);
  add_selection_flags(run_cmd, o);
  add_generation_flags(run_cmd, o);
  run_cmd->add_option("--jobs", o.jobs, "Queries processed in parallel")->capture_default_str();
  run_cmd->add_option("--out", o.out, "Output directory")->required();

  auto* bench_cmd = app.add_subcommand("bench", "Time smooth() over algorithms and sequence sizes");
  bench_cmd->add_option("--kg", o.kg, "Sample workloads from this KG instead of a synthetic one");
  bench_cmd->add_option("--entities", o.entities, "Synthetic KG size")->capture_default_str();
  bench_cmd->add_option("--sizes", o.sizes, "Triple counts")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--algos", o.algos, "Search algorithms")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--bench-queries", o.bench_queries, "Queries per cell")->capture_default_str();
  bench_cmd->add_option("--repeats", o.repeats, "Timings per query; the median is kept")->capture_default_str();
  add_pooling_flags(bench_cmd, o);
  bench_cmd->add_option("--out", o.out, "Directory for timing.txt and timing.tsv");

  auto* eval_cmd = app.add_subcommand("eval", "Score saved completions against gold answers");
  eval_cmd->add_option("--queries", o.queries, "Query file with answers")->required();
  eval_cmd->add_option("--completions", o.completions, "completions.jsonl from a run")->required();
  eval_cmd->add_option("--out", o.out, "Directory for results.jsonl and metrics.json");

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(o.verbose ? spdlog::level::debug : spdlog::level::info);

  try {
    if (*load_check) return cmd_load_check(o);
    if (*retrieve_cmd) return cmd_retrieve(o);
    if (*pool_cmd) return cmd_pool(o);
    if (*select_cmd) return cmd_select(o);
    if (*prompt_cmd) return cmd_prompt(o);
    if (*run_cmd) return cmd_run(o);
    if (*bench_cmd) return cmd_bench(o);
    if (*eval_cmd) return cmd_eval(o);
  } catch (const ConfigError& e) {
    spdlog::error("{}", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitRuntime;
  }
  return kExitRuntime;
}
