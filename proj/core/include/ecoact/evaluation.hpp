// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ecoact/backend.hpp"
#include "ecoact/cost_model.hpp"
#include "ecoact/reasoning.hpp"
#include "ecoact/run_config.hpp"

namespace ecoact {

/// Exact non-negative rational.
struct Ratio {
  std::uint64_t numerator{};
  std::uint64_t denominator{1};

  double value() const;
  double percent() const { return 100.0 * value(); }
  /// Percentage with one decimal, rounded half-up: "66.7".
  std::string percent_string() const;
  /// Equal as rationals (cross-multiplied).
  bool same_value(const Ratio& other) const;
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

/// Exact signed rational; used for savings, which go negative when the
/// lazy variant costs more than the baseline.
struct SignedRatio {
  std::int64_t numerator{};
  std::uint64_t denominator{1};

  double value() const;
  double percent() const { return 100.0 * value(); }
  /// One decimal, rounded half away from zero: "-12.5".
  std::string percent_string() const;
  friend bool operator==(const SignedRatio&, const SignedRatio&) = default;
};

/// Solved / (Solved + Unsolved). Throws EmptyDenominator.
Ratio pass_rate_filtered(std::uint64_t solved, std::uint64_t unsolved);
/// (Non-solvable + Solved) / (Non-solvable + Solved + Unsolved). Throws EmptyDenominator.
Ratio pass_rate_toolbench(std::uint64_t non_solvable, std::uint64_t solved,
                          std::uint64_t unsolved);

enum class AnswerStatus { Solved, Unsolved, Unsure };
enum class TaskStatus { Solvable, Unsolvable, Unsure };
std::string_view to_string(AnswerStatus status);
std::string_view to_string(TaskStatus status);
AnswerStatus answer_status_from_string(std::string_view text);
TaskStatus task_status_from_string(std::string_view text);

struct Verdict {
  AnswerStatus answer_status{AnswerStatus::Unsure};
  TaskStatus task_status{TaskStatus::Solvable};
  std::string judge_rationale;
};

Json to_json(const Verdict& verdict);
Verdict verdict_from_json(const Json& j);

struct JudgeResult {
  Verdict verdict;
  CostLedger ledger;  // judge calls only, never mixed into the agent ledger
  std::size_t calls{};
};

struct JudgeOptions {
  std::string model_id{"gpt-4-turbo"};
  PricingTable pricing{"gpt-4-turbo", 1000, 3000};
  int judge_retries{2};
  const TokenCounter* counter{nullptr};
};

/// check_answer_status, then parse_answer_status with the execution detail
/// when the first stage says Unsure. Traces without a final answer are
/// judged with kNoAnswerMarker. Throws JudgeSchemaError when a stage stays
/// unparseable after judge_retries re-asks.
JudgeResult judge(const Trace& trace, Backend& backend, const JudgeOptions& options = {});

struct SolvabilityResult {
  TaskStatus status{TaskStatus::Unsure};
  std::string rationale;
  CostLedger ledger;
};

/// Optional pre-pass: is `query` answerable with `tool_names`?
SolvabilityResult check_task_solvable(std::string_view query,
                                      const std::vector<std::string>& tool_names,
                                      Backend& backend, const JudgeOptions& options = {});

struct RatioPoint {
  std::size_t step{};
  std::size_t registered{};
  std::size_t roster{};
  double value() const { return roster == 0 ? 0.0 : double(registered) / double(roster); }
  friend bool operator==(const RatioPoint&, const RatioPoint&) = default;
};


Json to_json(const RatioPoint& point);
RatioPoint ratio_point_from_json(const Json& j);

/// One point per step of the returned path. Throws ZeroRoster.
std::vector<RatioPoint> registered_ratio_curve(const Trace& trace);
std::vector<RatioPoint> registered_ratio_curve(std::span<const RegistrationEvent> history,
                                               std::size_t steps, std::size_t roster_size);

enum class ToolScaleLevel { Level1 = 1, Level2 = 2, Level3 = 3 };
/// 0..10 -> Level1, 11..20 -> Level2, >20 -> Level3.
ToolScaleLevel level_for_tool_count(std::size_t candidate_tools);

struct QueryRow {
  std::string query_id;
  std::size_t candidate_tools{};
  Verdict verdict;
  FinalKind final{FinalKind::BudgetExhausted};
  MicroCents agent_cost;
  MicroCents judge_cost;
  TokenCount input_tokens{};
  TokenCount output_tokens{};
  std::size_t steps{};
  std::size_t backend_calls{};
  std::size_t restart_count{};
  std::vector<RatioPoint> ratio_curve;
  std::string error;  // non-empty when the trace failed and was scored Unsolved
};

struct LevelAggregate {
  std::size_t queries{};
  std::uint64_t solved{};
  std::uint64_t unsolved{};
  MicroCents total_cost;
  TokenCount input_tokens{};
  friend bool operator==(const LevelAggregate&, const LevelAggregate&) = default;
};

struct MethodAggregates {
  std::uint64_t solved{};
  std::uint64_t unsolved{};  // includes final Unsure verdicts
  std::uint64_t non_solvable{};
  std::size_t queries{};
  MicroCents total_cost;
  MicroCents judge_cost;
  TokenCount input_tokens{};
  std::array<LevelAggregate, 3> levels{};
  friend bool operator==(const MethodAggregates&, const MethodAggregates&) = default;

  std::optional<Ratio> pass_rate_filtered() const;
  std::optional<Ratio> pass_rate_toolbench() const;
  /// total_cost / queries, as a micro-cent rational.
  Ratio mean_cost_microcents() const;
};

/// Per-level partition of rows. Every row lands in exactly one bucket.
std::array<std::vector<const QueryRow*>, 3> bucket_by_tool_scale(const std::vector<QueryRow>& rows);

MethodAggregates compute_aggregates(const std::vector<QueryRow>& rows);

struct MethodReport {
  std::string method;  // e.g. "react+ecoact"
  Engine engine{Engine::React};
  Variant variant{Variant::EcoAct};
  std::vector<QueryRow> rows;
  MethodAggregates aggregates;
};

struct SavingsRow {
  std::string scope;  // "overall", "level1", ...
  MicroCents ecoact_cost;
  MicroCents eager_cost;
  TokenCount ecoact_input_tokens{};
  TokenCount eager_input_tokens{};
  /// 1 - ecoact/eager as an exact rational; absent when eager is zero.
  std::optional<SignedRatio> cost_savings() const;
  std::optional<SignedRatio> input_token_savings() const;
};

struct BenchReport {
  std::string suite_id;
  std::vector<MethodReport> methods;
  std::vector<SavingsRow> savings;  // filled for paired ecoact/eager runs
};

/// Pairs the first ecoact and first eager method (same engine) row by row.
std::vector<SavingsRow> compute_savings(const MethodReport& ecoact, const MethodReport& eager);

Json to_json(const QueryRow& row);
QueryRow query_row_from_json(const Json& j);
Json to_json(const MethodAggregates& aggregates);
Json to_json(const BenchReport& report);
BenchReport bench_report_from_json(const Json& j);

/// Human-readable table in the PR (%) / Cost (cents) layout.
std::string render_table(const BenchReport& report);
/// level,method,queries,pass_rate,mean_cost_cents,total_cost_cents
std::string render_level_csv(const BenchReport& report);
/// method,query_id,step,registered,roster,ratio
std::string render_ratio_csv(const BenchReport& report);

}  // namespace ecoact
