// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ecoact/evaluation.hpp"
#include "ecoact/reasoning.hpp"
#include "ecoact/run_config.hpp"

namespace ecoact {

/// First line of a trace file: everything needed to reproduce the run.
struct TraceHeader {
  RunConfig config;
  std::string query_id;
  std::string query;
  std::string corpus_path;
  std::string corpus_hash;  // fnv1a64 of the corpus file bytes
  std::vector<std::string> candidates;
  std::string observations_path;
  std::string counter_id{"rule-v1"};
  std::string created_at;  // ISO-8601 UTC; empty to omit
};

/// JSON Lines: header, one "step" record per backend call, footer.
std::string render_trace_file(const TraceHeader& header, const Trace& trace,
                              const std::optional<JudgeResult>& judged = std::nullopt);
void write_trace_file(const std::filesystem::path& path, const TraceHeader& header,
                      const Trace& trace, const std::optional<JudgeResult>& judged = std::nullopt);

struct LoadedTrace {
  TraceHeader header;
  Trace trace;
  std::optional<Verdict> verdict;
};

/// Throws ParseError on malformed lines or missing header/footer.
LoadedTrace parse_trace_file(const std::string& text);
LoadedTrace read_trace_file(const std::filesystem::path& path);

/// Drops "created_at" values so two runs can be compared byte-for-byte.
std::string strip_timestamps(const std::string& jsonl);

std::string utc_timestamp_now();

}  // namespace ecoact
