// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ecoact/backend.hpp"
#include "ecoact/evaluation.hpp"
#include "ecoact/reasoning.hpp"
#include "ecoact/run_config.hpp"
#include "ecoact/trace_file.hpp"

namespace ecoact {

struct SuiteEntry {
  std::string query_id;
  std::string query;
  std::filesystem::path corpus;
  std::vector<std::string> candidates;  // empty = whole corpus
  /// Keyed by "ecoact", "eager", "ecoact_multiple", ...
  std::map<std::string, std::filesystem::path> scripts;
  std::filesystem::path observations;
};

struct Suite {
  std::string suite_id;
  std::vector<SuiteEntry> entries;
  std::filesystem::path judge_script;
  std::filesystem::path source;
};

/// Relative paths resolve against the suite file's directory.
/// Throws ValidationError on duplicate query ids or unresolvable corpora.
Suite load_suite(const std::filesystem::path& path);

/// Corpus restricted to the entry's candidates, capped at the pool size.
ToolCorpus entry_corpus(const SuiteEntry& entry, std::size_t candidate_pool_size);

/// Script key for a config: "<variant>" or "<variant>_multiple".
std::filesystem::path entry_script(const SuiteEntry& entry, const RunConfig& config);

/// Makes a backend for one trace. Null factory means hermetic scripted mode.
using BackendFactory = std::function<std::unique_ptr<Backend>()>;

struct RunRequest {
  std::string query_id;
  std::string query;
  std::filesystem::path corpus_path;
  std::vector<std::string> candidates;
  std::filesystem::path script;        // scripted mode
  std::filesystem::path observations;  // mock executor fixtures
  RunConfig config;
  bool timestamps{true};
};

struct RunResult {
  TraceHeader header;
  Trace trace;
};

/// Runs one trace against an already constructed backend. Throws
/// CorpusNotFound when the corpus file is missing.
RunResult run_with_backend(const RunRequest& request, Backend& backend,
                           const RunServices& services = {});

/// Runs one trace. With a null factory, `script` must name a script file.
RunResult run_single(const RunRequest& request, const BackendFactory& live = {},
                     const RunServices& services = {});

enum class BenchMethods { Configured, Paired };

struct BenchOptions {
  RunConfig config;
  BenchMethods methods{BenchMethods::Configured};
  std::filesystem::path output_dir;  // empty: nothing written
  bool timestamps{true};
  bool solvability_prepass{false};
  BackendFactory live_agent;  // null: scripted
  BackendFactory live_judge;  // null: suite judge script
  std::function<void(std::chrono::milliseconds)> sleep;
};

/// Runs every entry (config.jobs traces at a time), judges, aggregates.
/// A trace that throws is recorded as Unsolved with the error text.
/// Writes report.json, report.txt, levels.csv, ratios.csv and traces/ when
/// output_dir is set.
BenchReport run_bench(const Suite& suite, const BenchOptions& options);

struct StepTokenComparison {
  std::size_t step{};
  TokenCount necessary_tokens{};   // declarations of tools registered by this step
  TokenCount eager_tokens{};       // declarations of the whole corpus
  TokenCount trace_tool_tokens{};  // what the trace actually sent
};

std::vector<StepTokenComparison> necessary_vs_actual(const Trace& trace, const ToolCorpus& corpus,
                                                     const TokenCounter& counter);

/// Savings of `ecoact` relative to `eager` computed from the two ledgers.
SavingsRow compare_traces(const Trace& ecoact, const Trace& eager);

/// step,registered,roster,ratio
std::string ratio_curve_csv(const Trace& trace);

/// Re-runs a recorded trace against its own responses.
RunResult replay(const LoadedTrace& recorded, const RunServices& services = {});

}  // namespace ecoact
