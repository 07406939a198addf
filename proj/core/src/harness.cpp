// SPDX-License-Identifier: Apache-2.0
#include "ecoact/harness.hpp"

#include <atomic>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "ecoact/errors.hpp"
#include "ecoact/executor.hpp"
#include "ecoact/scripted_backend.hpp"

namespace ecoact {
namespace {

std::string read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusNotFound(path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write {}", path.string()));
  out << text;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  if (p.empty()) return {};
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

ToolCorpus restrict(const ToolCorpus& full, const std::vector<std::string>& candidates,
                    std::size_t pool) {
  std::vector<std::string> names = candidates.empty() ? full.names() : candidates;
  if (pool > 0 && names.size() > pool) names.resize(pool);
  return full.subset(names);
}

std::string method_name(const RunConfig& c) {
  std::string name = fmt::format("{}+{}", to_string(c.engine), to_string(c.variant));
  if (c.variant == Variant::EcoAct) {
    if (c.multi == MultiRegistrationPolicy::Multiple) name += "+multiple";
    if (c.mode == RegistrationContextMode::NamePlusDescription) name += "+desc";
  }
  return name;
}

JudgeOptions judge_options(const RunConfig& config) {
  JudgeOptions options;
  options.model_id = config.judge_model_id;
  options.pricing.model_id = config.judge_model_id;
  options.judge_retries = config.judge_retries;
  if (!config.pricing_ref.empty()) {
    const PricingCatalog catalog = load_pricing(config.pricing_ref);
    if (const auto it = catalog.find(config.judge_model_id); it != catalog.end()) {
      options.pricing = it->second;
    }
  }
  return options;
}

struct Job {
  std::size_t method{};
  std::size_t entry{};
};

}  // namespace

Suite load_suite(const std::filesystem::path& path) {
  Json j;
  try {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(fmt::format("suite not found: {}", path.string()));
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
  }
  const std::filesystem::path base = path.parent_path();
  Suite suite;
  suite.source = path;
  try {
    suite.suite_id = j.at("suite_id").get<std::string>();
    suite.judge_script = resolve(base, j.value("judge_script", std::string{}));
    std::set<std::string> seen;
    for (const auto& e : j.at("entries")) {
      SuiteEntry entry;
      entry.query_id = e.at("query_id").get<std::string>();
      if (!seen.insert(entry.query_id).second) {
        throw ValidationError(entry.query_id, fmt::format("duplicate query_id '{}'", entry.query_id));
      }
      entry.query = e.at("query").get<std::string>();
      entry.corpus = resolve(base, e.at("corpus").get<std::string>());
      if (!std::filesystem::is_regular_file(entry.corpus)) {
        throw ValidationError(entry.query_id, fmt::format("corpus not found: {}", entry.corpus.string()));
      }
      entry.candidates = e.value("candidates", std::vector<std::string>{});
      const Json scripts = e.value("scripts", Json::object());
      for (const auto& [key, value] : scripts.items()) {
        entry.scripts.emplace(key, resolve(base, value.get<std::string>()));
      }
      entry.observations = resolve(base, e.value("observations", std::string{}));
      suite.entries.push_back(std::move(entry));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
  }
  return suite;
}

ToolCorpus entry_corpus(const SuiteEntry& entry, std::size_t candidate_pool_size) {
  return restrict(load_corpus(entry.corpus), entry.candidates, candidate_pool_size);
}

std::filesystem::path entry_script(const SuiteEntry& entry, const RunConfig& config) {
  std::string key(to_string(config.variant));
  if (config.variant == Variant::EcoAct && config.multi == MultiRegistrationPolicy::Multiple) {
    key += "_multiple";
  }
  const auto it = entry.scripts.find(key);
  if (it == entry.scripts.end()) {
    throw ConfigError(fmt::format("entry '{}' has no '{}' script", entry.query_id, key));
  }
  return it->second;
}

RunResult run_with_backend(const RunRequest& request, Backend& backend, const RunServices& services) {
  if (!std::filesystem::is_regular_file(request.corpus_path)) {
    throw CorpusNotFound(request.corpus_path.string());
  }
  const std::string bytes = read_bytes(request.corpus_path);
  Json document;
  try {
    document = Json::parse(bytes);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(fmt::format("{}: {}", request.corpus_path.string(), e.what()));
  }
  const ToolCorpus full = corpus_from_json(document, request.corpus_path.string());
  const ToolCorpus corpus = restrict(full, request.candidates, request.config.candidate_pool_size);

  MockExecutor fixtures;
  if (!request.observations.empty()) fixtures = load_mock_executor(request.observations);
  RunServices effective = services;
  if (effective.executor == nullptr) effective.executor = &fixtures;

  RunResult result;
  result.trace = run_trace(request.query, corpus, backend, request.config, effective);

  TraceHeader& h = result.header;
  h.config = request.config;
  h.query_id = request.query_id;
  h.query = request.query;
  h.corpus_path = request.corpus_path.generic_string();
  h.corpus_hash = fnv1a64_hex(bytes);
  h.candidates = request.candidates;
  h.observations_path = request.observations.generic_string();
  h.counter_id = std::string(
      (effective.counter != nullptr ? *effective.counter : default_counter()).id());
  if (request.timestamps) h.created_at = utc_timestamp_now();
  return result;
}

RunResult run_single(const RunRequest& request, const BackendFactory& live,
                     const RunServices& services) {
  if (!std::filesystem::is_regular_file(request.corpus_path)) {
    throw CorpusNotFound(request.corpus_path.string());
  }
  if (live) {
    const std::unique_ptr<Backend> backend = live();
    return run_with_backend(request, *backend, services);
  }
  if (request.script.empty()) throw ConfigError("hermetic mode needs a script");
  ScriptedBackend backend(load_script(request.script));
  return run_with_backend(request, backend, services);
}

BenchReport run_bench(const Suite& suite, const BenchOptions& options) {
  std::vector<RunConfig> configs;
  if (options.methods == BenchMethods::Paired) {
    RunConfig lazy = options.config;
    lazy.variant = Variant::EcoAct;
    RunConfig eager = options.config;
    eager.variant = Variant::Eager;
    configs = {lazy, eager};
  } else {
    configs = {options.config};
  }

  BenchReport report;
  report.suite_id = suite.suite_id;
  for (const auto& c : configs) {
    MethodReport m;
    m.method = method_name(c);
    m.engine = c.engine;
    m.variant = c.variant;
    m.rows.resize(suite.entries.size());
    report.methods.push_back(std::move(m));
  }

  const JudgeOptions judging = judge_options(options.config);
  std::optional<ScriptedPolicy> judge_policy;
  if (!options.live_judge) {
    if (suite.judge_script.empty()) throw ConfigError("suite has no judge_script and no live judge");
    judge_policy = load_script(suite.judge_script);
  }

  std::vector<Job> jobs;
  for (std::size_t m = 0; m < configs.size(); ++m) {
    for (std::size_t e = 0; e < suite.entries.size(); ++e) jobs.push_back({m, e});
  }
  std::vector<std::string> trace_files(jobs.size());

  const auto run_job = [&](std::size_t index) {
    const Job job = jobs[index];
    const RunConfig& config = configs[job.method];
    const SuiteEntry& entry = suite.entries[job.entry];
    QueryRow& row = report.methods[job.method].rows[job.entry];
    row.query_id = entry.query_id;
    try {
      row.candidate_tools = entry_corpus(entry, config.candidate_pool_size).size();
      RunRequest request;
      request.query_id = entry.query_id;
      request.query = entry.query;
      request.corpus_path = entry.corpus;
      request.candidates = entry.candidates;
      request.observations = entry.observations;
      request.config = config;
      request.timestamps = options.timestamps;
      if (!options.live_agent) request.script = entry_script(entry, config);

      RunServices services;
      services.sleep = options.sleep;
      RunResult result = run_single(request, options.live_agent, services);

      std::unique_ptr<Backend> judge_backend =
          options.live_judge ? options.live_judge()
                             : std::make_unique<ScriptedBackend>(*judge_policy);
      if (options.solvability_prepass) {
        const ToolCorpus corpus = entry_corpus(entry, config.candidate_pool_size);
        const SolvabilityResult s =
            check_task_solvable(entry.query, corpus.names(), *judge_backend, judging);
        row.verdict.task_status = s.status;
        row.judge_cost += total_cost(s.ledger);
      }
      const JudgeResult judged = judge(result.trace, *judge_backend, judging);
      const TaskStatus task = row.verdict.task_status;
      row.verdict = judged.verdict;
      row.verdict.task_status = task;
      row.judge_cost += total_cost(judged.ledger);

      const Trace& t = result.trace;
      row.final = t.final;
      row.agent_cost = total_cost(t.ledger);
      row.input_tokens = t.ledger.total_input_tokens();
      row.output_tokens = t.ledger.total_output_tokens();
      row.steps = t.steps.size();
      row.backend_calls = t.calls.size();
      row.restart_count = t.restart_count;
      row.ratio_curve = registered_ratio_curve(t);
      if (!options.output_dir.empty()) {
        trace_files[index] = render_trace_file(result.header, t, judged);
      }
    } catch (const std::exception& e) {
      row.verdict = Verdict{AnswerStatus::Unsolved, TaskStatus::Solvable, {}};
      row.final = FinalKind::BudgetExhausted;
      row.error = e.what();
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(options.config.jobs, jobs.size()));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < jobs.size(); i = next++) run_job(i);
    });
  }
  for (auto& t : pool) t.join();

  for (auto& m : report.methods) m.aggregates = compute_aggregates(m.rows);
  if (options.methods == BenchMethods::Paired) {
    report.savings = compute_savings(report.methods[0], report.methods[1]);
  }

  if (!options.output_dir.empty()) {
    const auto& dir = options.output_dir;
    write_text(dir / "report.json", to_json(report).dump(2) + "\n");
    write_text(dir / "report.txt", render_table(report));
    write_text(dir / "levels.csv", render_level_csv(report));
    write_text(dir / "ratios.csv", render_ratio_csv(report));
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      if (trace_files[i].empty()) continue;
      const auto& method = report.methods[jobs[i].method].method;
      const auto& id = suite.entries[jobs[i].entry].query_id;
      write_text(dir / "traces" / method / (id + ".jsonl"), trace_files[i]);
    }
  }
  return report;
}

std::vector<StepTokenComparison> necessary_vs_actual(const Trace& trace, const ToolCorpus& corpus,
                                                     const TokenCounter& counter) {
  std::vector<std::string> all;
  for (const auto& tool : corpus.tools()) all.push_back(serialize_declaration(tool));
  const TokenCount eager_tokens = counter.count(join_declarations(all));

  std::vector<StepTokenComparison> out;
  for (const auto& step : trace.steps) {
    std::vector<std::string> needed;
    if (trace.variant == Variant::Eager) {
      needed = all;
    } else {
      for (const auto& e : trace.registration_history) {
        if (e.step <= step.index && e.outcome == RegistrationEventKind::Registered) {
          const ToolSpec* tool = corpus.find(e.tool_name);
          if (tool == nullptr) throw UnknownTool(e.tool_name);
          needed.push_back(serialize_declaration(*tool));
        }
      }
    }
    out.push_back(StepTokenComparison{step.index, counter.count(join_declarations(needed)),
                                      eager_tokens, step.cost.tool_context_tokens});
  }
  return out;
}

SavingsRow compare_traces(const Trace& ecoact, const Trace& eager) {
  SavingsRow row;
  row.scope = "trace";
  row.ecoact_cost = total_cost(ecoact.ledger);
  row.eager_cost = total_cost(eager.ledger);
  row.ecoact_input_tokens = ecoact.ledger.total_input_tokens();
  row.eager_input_tokens = eager.ledger.total_input_tokens();
  return row;
}

std::string ratio_curve_csv(const Trace& trace) {
  std::string out = "step,registered,roster,ratio\n";
  for (const auto& p : registered_ratio_curve(trace)) {
    out += fmt::format("{},{},{},{:.6f}\n", p.step, p.registered, p.roster, p.value());
  }
  return out;
}

RunResult replay(const LoadedTrace& recorded, const RunServices& services) {
  std::vector<BackendResponse> responses;
  responses.reserve(recorded.trace.calls.size());
  for (const auto& call : recorded.trace.calls) responses.push_back(call.response);
  ScriptedBackend backend(replay_script(std::move(responses), Exhaustion::Error));

  const TraceHeader& h = recorded.header;
  RunRequest request;
  request.query_id = h.query_id;
  request.query = h.query;
  request.corpus_path = h.corpus_path;
  request.candidates = h.candidates;
  request.observations = h.observations_path;
  request.config = h.config;
  request.timestamps = !h.created_at.empty();

  if (!h.corpus_hash.empty() && std::filesystem::is_regular_file(request.corpus_path) &&
      fnv1a64_hex(read_bytes(request.corpus_path)) != h.corpus_hash) {
    throw ConfigError(fmt::format("corpus {} changed since the trace was recorded", h.corpus_path));
  }
  return run_with_backend(request, backend, services);
}

}  // namespace ecoact
