// SPDX-License-Identifier: Apache-2.0
// ecoact: run single queries, benchmark suites, analyze and replay traces.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ecoact/errors.hpp"
#include "ecoact/harness.hpp"
#include "ecoact/http_backend.hpp"
#include "ecoact/scripted_backend.hpp"

namespace {

using namespace ecoact;

constexpr int kExitUsage = 2;
constexpr int kExitBackend = 3;

// Flags mirror RunConfig fields. Only flags the user actually set end up in
// the overlay, so config-file values survive unless overridden.
struct ConfigFlags {
  std::string config_file;
  std::string engine, variant, mode, multi, model, pricing, judge_model;
  std::optional<std::size_t> max_steps, max_total_steps, dfsdt_max_children, malformed_limit,
      candidate_pool_size, jobs;
  std::optional<int> retries, judge_retries;
  std::optional<std::int64_t> backoff_ms, seed;
  std::optional<std::uint64_t> obs_token_limit;
  std::optional<double> temperature;
  bool log_wire{false};

  void attach(CLI::App* app) {
    app->add_option("--config", config_file, "Run configuration JSON");
    app->add_option("--engine", engine, "react | dfsdt");
    app->add_option("--variant", variant, "ecoact | eager");
    app->add_option("--mode", mode, "name_only | name_plus_description");
    app->add_option("--multi", multi, "single | multiple");
    app->add_option("--max-steps", max_steps);
    app->add_option("--max-total-steps", max_total_steps);
    app->add_option("--dfsdt-max-children", dfsdt_max_children);
    app->add_option("--retries", retries);
    app->add_option("--backoff-ms", backoff_ms);
    app->add_option("--malformed-limit", malformed_limit);
    app->add_option("--obs-token-limit", obs_token_limit);
    app->add_option("--model", model);
    app->add_option("--pricing", pricing, "Pricing catalog JSON");
    app->add_option("--seed", seed);
    app->add_option("--temperature", temperature);
    app->add_flag("--log-wire", log_wire);
    app->add_option("--judge-retries", judge_retries);
    app->add_option("--judge-model", judge_model);
    app->add_option("--candidate-pool-size", candidate_pool_size);
    app->add_option("--jobs", jobs);
  }

  RunConfig build() const {
    RunConfig config;
    if (!config_file.empty()) config = load_run_config(config_file);
    Json overlay = Json::object();
    const auto put_str = [&](const char* key, const std::string& v) {
      if (!v.empty()) overlay[key] = v;
    };
    const auto put = [&](const char* key, const auto& v) {
      if (v) overlay[key] = *v;
    };
    put_str("engine", engine);
    put_str("variant", variant);
    put_str("mode", mode);
    put_str("multi", multi);
    put_str("model_id", model);
    put_str("judge_model_id", judge_model);
    put("max_steps", max_steps);
    put("max_total_steps", max_total_steps);
    put("dfsdt_max_children", dfsdt_max_children);
    put("retries", retries);
    put("backoff_ms", backoff_ms);
    put("malformed_limit", malformed_limit);
    put("obs_token_limit", obs_token_limit);
    put("seed", seed);
    put("temperature", temperature);
    put("judge_retries", judge_retries);
    put("candidate_pool_size", candidate_pool_size);
    put("jobs", jobs);
    if (log_wire) overlay["log_wire"] = true;
    config = apply_config_json(config, overlay);
    if (!pricing.empty()) config.pricing_ref = pricing;
    return resolve_pricing(config);
  }
};

struct LiveFlags {
  bool live{false};
  std::string endpoint{"https://api.openai.com/v1"};

  void attach(CLI::App* app) {
    app->add_flag("--live", live, "Call an OpenAI-compatible endpoint instead of a script");
    app->add_option("--endpoint", endpoint, "Base URL of the chat-completions API");
  }

  BackendFactory factory(const RunConfig& config) const {
    if (!live) return {};
    HttpBackendConfig http{endpoint, api_key_from_env(), std::chrono::seconds(120), config.log_wire};
    if (http.api_key.empty()) throw ConfigError("live mode needs ECOACT_API_KEY or OPENAI_API_KEY");
    return [http] { return std::make_unique<HttpBackend>(http); };
  }
};

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  for (char c : text) {
    if (c == ',') {
      if (!item.empty()) out.push_back(item);
      item.clear();
    } else {
      item += c;
    }
  }
  if (!item.empty()) out.push_back(item);
  return out;
}

void print_trace_summary(const Trace& t) {
  fmt::print("final: {}\n", to_string(t.final));
  if (!t.answer.empty()) fmt::print("answer: {}\n", t.answer);
  fmt::print("steps: {}\n", t.steps.size());
  fmt::print("backend calls: {}\n", t.calls.size());
  if (t.engine == Engine::Dfsdt) fmt::print("restarts: {}\n", t.restart_count);
  fmt::print("registered: {}/{}\n", t.variant == Variant::Eager ? t.roster_size : t.registered.size(),
             t.roster_size);
  fmt::print("input tokens: {}\n", t.ledger.total_input_tokens());
  fmt::print("output tokens: {}\n", t.ledger.total_output_tokens());
  fmt::print("cost: {}¢\n", format_cents(total_cost(t.ledger)));
}

std::string ledger_signature(const Trace& t) { return to_json(t.ledger).dump(); }

// --- run --------------------------------------------------------------------

struct RunArgs {
  ConfigFlags config;
  LiveFlags live;
  std::string query, query_id{"query"}, corpus, candidates, script, observations, out, replay_path,
      judge_script;
  bool no_timestamps{false};
};

int cmd_run(const RunArgs& a) {
  if (!a.replay_path.empty()) {
    const LoadedTrace recorded = read_trace_file(a.replay_path);
    const RunResult result = replay(recorded);
    print_trace_summary(result.trace);
    const bool same = ledger_signature(result.trace) == ledger_signature(recorded.trace);
    fmt::print("replay ledger: {}\n", same ? "identical" : "DIFFERENT");
    if (!a.out.empty()) write_trace_file(a.out, result.header, result.trace);
    return same ? 0 : 1;
  }
  if (a.query.empty()) throw ConfigError("run needs --query (or --replay)");
  if (a.corpus.empty()) throw ConfigError("run needs --corpus");

  RunRequest request;
  request.query_id = a.query_id;
  request.query = a.query;
  request.corpus_path = a.corpus;
  request.candidates = split_csv(a.candidates);
  request.script = a.script;
  request.observations = a.observations;
  request.config = a.config.build();
  request.timestamps = !a.no_timestamps;
  if (!std::filesystem::is_regular_file(request.corpus_path)) throw CorpusNotFound(a.corpus);

  const BackendFactory live = a.live.factory(request.config);
  if (!live && request.script.empty()) throw ConfigError("run needs --script or --live");
  const RunResult result = run_single(request, live);
  print_trace_summary(result.trace);

  std::optional<JudgeResult> judged;
  if (!a.judge_script.empty()) {
    ScriptedBackend judge_backend(load_script(a.judge_script));
    JudgeOptions options;
    options.model_id = request.config.judge_model_id;
    options.judge_retries = request.config.judge_retries;
    judged = judge(result.trace, judge_backend, options);
    fmt::print("verdict: {}\n", to_string(judged->verdict.answer_status));
  }
  if (!a.out.empty()) {
    write_trace_file(a.out, result.header, result.trace, judged);
    fmt::print("trace: {}\n", a.out);
  }
  return 0;
}

// --- bench ------------------------------------------------------------------

struct BenchArgs {
  ConfigFlags config;
  LiveFlags live;
  std::string suite, out;
  bool paired{false}, no_timestamps{false}, solvability{false}, live_judge{false};
};

int cmd_bench(const BenchArgs& a) {
  const Suite suite = load_suite(a.suite);
  BenchOptions options;
  options.config = a.config.build();
  options.methods = a.paired ? BenchMethods::Paired : BenchMethods::Configured;
  options.output_dir = a.out;
  options.timestamps = !a.no_timestamps;
  options.solvability_prepass = a.solvability;
  options.live_agent = a.live.factory(options.config);
  if (a.live_judge) {
    LiveFlags judge_live = a.live;
    judge_live.live = true;
    options.live_judge = judge_live.factory(options.config);
  }
  const BenchReport report = run_bench(suite, options);
  fmt::print("{}", render_table(report));
  for (const auto& m : report.methods) {
    for (const auto& row : m.rows) {
      if (!row.error.empty()) fmt::print(stderr, "{} {}: {}\n", m.method, row.query_id, row.error);
    }
  }
  if (!a.out.empty()) fmt::print("\nreport written to {}\n", a.out);
  return 0;
}

// --- analyze ----------------------------------------------------------------

struct AnalyzeArgs {
  std::vector<std::string> compare;
  std::string necessary, components, mode{"full"}, report, ratio_csv;
};

int cmd_analyze(const AnalyzeArgs& a) {
  bool did_something = false;
  if (!a.compare.empty()) {
    if (a.compare.size() != 2) throw ConfigError("--compare takes <ecoact-trace> <eager-trace>");
    const LoadedTrace lazy = read_trace_file(a.compare[0]);
    const LoadedTrace eager = read_trace_file(a.compare[1]);
    const SavingsRow row = compare_traces(lazy.trace, eager.trace);
    fmt::print("ecoact cost: {}¢  input tokens: {}\n", format_cents(row.ecoact_cost),
               row.ecoact_input_tokens);
    fmt::print("eager  cost: {}¢  input tokens: {}\n", format_cents(row.eager_cost),
               row.eager_input_tokens);
    const auto cost = row.cost_savings();
    const auto tokens = row.input_token_savings();
    fmt::print("cost savings: {}%\n", cost ? cost->percent_string() : "-");
    fmt::print("input token savings: {}%\n", tokens ? tokens->percent_string() : "-");
    did_something = true;
  }
  if (!a.necessary.empty()) {
    const LoadedTrace loaded = read_trace_file(a.necessary);
    const ToolCorpus full = load_corpus(loaded.header.corpus_path);
    std::vector<std::string> names =
        loaded.header.candidates.empty() ? full.names() : loaded.header.candidates;
    if (names.size() > loaded.header.config.candidate_pool_size) {
      names.resize(loaded.header.config.candidate_pool_size);
    }
    const ToolCorpus corpus = full.subset(names);
    fmt::print("step,necessary_tokens,eager_tokens,trace_tool_tokens\n");
    for (const auto& c : necessary_vs_actual(loaded.trace, corpus, default_counter())) {
      fmt::print("{},{},{},{}\n", c.step, c.necessary_tokens, c.eager_tokens, c.trace_tool_tokens);
    }
    did_something = true;
  }
  if (!a.components.empty()) {
    const ToolCorpus corpus = load_corpus(a.components);
    const CorpusComponentShares s = component_shares(corpus, default_counter());
    fmt::print("tools: {}\n", corpus.size());
    fmt::print("component tokens: {}\n", s.totals.total_tokens);
    fmt::print("name: {:.2f}%\n", 100.0 * s.name_fraction);
    fmt::print("description: {:.2f}%\n", 100.0 * s.description_fraction);
    fmt::print("parameters: {:.2f}%\n", 100.0 * s.parameter_fraction);
    const RegistrationContextMode mode = mode_from_string(a.mode);
    fmt::print("context tokens ({}): {}\n", to_string(mode),
               corpus_token_length(corpus.names(), corpus, mode, default_counter()));
    did_something = true;
  }
  if (!a.report.empty()) {
    std::ifstream in(a.report, std::ios::binary);
    if (!in) throw ParseError(fmt::format("cannot read report {}", a.report));
    const BenchReport report = bench_report_from_json(Json::parse(in));
    fmt::print("{}", render_table(report));
    fmt::print("\n{}", render_level_csv(report));
    did_something = true;
  }
  if (!a.ratio_csv.empty()) {
    fmt::print("{}", ratio_curve_csv(read_trace_file(a.ratio_csv).trace));
    did_something = true;
  }
  if (!did_something) throw ConfigError("analyze needs at least one of --compare, --necessary, "
                                        "--components, --report, --ratio-csv");
  return 0;
}

// --- replay -----------------------------------------------------------------

struct ReplayArgs {
  std::string trace, out;
};

int cmd_replay(const ReplayArgs& a) {
  const LoadedTrace recorded = read_trace_file(a.trace);
  const RunResult result = replay(recorded);
  const std::string before = strip_timestamps(render_trace_file(recorded.header, recorded.trace));
  const std::string after = strip_timestamps(render_trace_file(result.header, result.trace));
  print_trace_summary(result.trace);
  if (!a.out.empty()) write_trace_file(a.out, result.header, result.trace);
  const bool same = before == after;
  fmt::print("replay: {}\n", same ? "identical" : "DIFFERENT");
  return same ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lazy tool registration for function-calling agents"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run one query and write a trace file");
  run.config.attach(run_cmd);
  run.live.attach(run_cmd);
  run_cmd->add_option("--query,-q", run.query);
  run_cmd->add_option("--query-id", run.query_id);
  run_cmd->add_option("--corpus,-c", run.corpus, "Tool corpus JSON");
  run_cmd->add_option("--candidates", run.candidates, "Comma-separated tool names");
  run_cmd->add_option("--script,-s", run.script, "Scripted backend responses");
  run_cmd->add_option("--observations", run.observations, "Mock executor fixtures");
  run_cmd->add_option("--judge-script", run.judge_script);
  run_cmd->add_option("--out,-o", run.out, "Trace file to write");
  run_cmd->add_option("--replay", run.replay_path, "Re-run a recorded trace");
  run_cmd->add_flag("--no-timestamps", run.no_timestamps);

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark suite");
  bench.config.attach(bench_cmd);
  bench.live.attach(bench_cmd);
  bench_cmd->add_option("suite", bench.suite)->required();
  bench_cmd->add_option("--out,-o", bench.out, "Output directory");
  bench_cmd->add_flag("--paired", bench.paired, "Run ecoact and eager side by side");
  bench_cmd->add_flag("--no-timestamps", bench.no_timestamps);
  bench_cmd->add_flag("--solvability", bench.solvability, "Judge task solvability first");
  bench_cmd->add_flag("--live-judge", bench.live_judge);

  AnalyzeArgs analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Inspect traces, corpora and reports");
  analyze_cmd->add_option("--compare", analyze.compare, "<ecoact-trace> <eager-trace>")
      ->expected(2);
  analyze_cmd->add_option("--necessary", analyze.necessary, "Trace file");
  analyze_cmd->add_option("--components", analyze.components, "Corpus file");
  analyze_cmd->add_option("--mode", analyze.mode);
  analyze_cmd->add_option("--report", analyze.report, "report.json");
  analyze_cmd->add_option("--ratio-csv", analyze.ratio_csv, "Trace file");

  ReplayArgs replay_args;
  auto* replay_cmd = app.add_subcommand("replay", "Replay a trace and check it reproduces");
  replay_cmd->add_option("trace", replay_args.trace)->required();
  replay_cmd->add_option("--out,-o", replay_args.out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(run);
    if (*bench_cmd) return cmd_bench(bench);
    if (*analyze_cmd) return cmd_analyze(analyze);
    if (*replay_cmd) return cmd_replay(replay_args);
  } catch (const ConfigError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const ParseError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const ValidationError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const BackendError& e) {
    fmt::print(stderr, "backend error: {}\n", e.what());
    return kExitBackend;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
