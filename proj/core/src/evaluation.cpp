// SPDX-License-Identifier: Apache-2.0
#include "ecoact/evaluation.hpp"

#include <limits>

#include <fmt/format.h>

#include "ecoact/errors.hpp"
#include "ecoact/prompts.hpp"

namespace ecoact {
namespace {

__extension__ using u128 = unsigned __int128;

// Tenths of a percent of n/d, rounded half-up.
std::uint64_t permille_rounded(std::uint64_t n, std::uint64_t d) {
  const u128 scaled = u128(n) * 2000u + d;
  return static_cast<std::uint64_t>(scaled / (u128(d) * 2u));
}

std::string tenths_string(std::uint64_t tenths, bool negative) {
  return fmt::format("{}{}.{}", negative && tenths != 0 ? "-" : "", tenths / 10, tenths % 10);
}

std::optional<SignedRatio> savings(std::uint64_t lazy, std::uint64_t eager) {
  if (eager == 0) return std::nullopt;
  const bool negative = lazy > eager;
  const std::uint64_t magnitude = negative ? lazy - eager : eager - lazy;
  if (magnitude > std::uint64_t(std::numeric_limits<std::int64_t>::max())) {
    throw std::overflow_error("savings numerator does not fit 64 bits");
  }
  const auto n = static_cast<std::int64_t>(magnitude);
  return SignedRatio{negative ? -n : n, eager};
}

Json judge_declaration(std::string_view name, std::string_view field,
                       std::initializer_list<std::string_view> values) {
  Json enum_values = Json::array();
  for (auto v : values) enum_values.push_back(v);
  return Json{{"name", name},
              {"description", fmt::format("Report {} and the reasoning behind it.", field)},
              {"parameters",
               {{"type", "object"},
                {"properties",
                 {{"content", {{"type", "string"}}},
                  {std::string(field), {{"type", "string"}, {"enum", enum_values}}}}},
                {"required", Json::array({"content", field})}}}};
}

struct JudgeCall {
  std::string status;
  std::string rationale;
};

// Sends one judge prompt, re-asking until the reply names a valid status.
JudgeCall ask_judge(Backend& backend, const JudgeOptions& options, const std::string& prompt,
                    const Json& declaration, std::string_view field,
                    const std::function<bool(const std::string&)>& valid, CostLedger& ledger,
                    std::size_t& calls) {
  const TokenCounter& counter = options.counter != nullptr ? *options.counter : default_counter();
  BackendRequest request;
  request.model_id = options.model_id;
  request.messages.push_back(Message{Role::User, prompt, std::nullopt, {}});
  request.function_declarations.push_back(declaration.dump());
  request.temperature = 0;

  const int attempts = 1 + std::max(options.judge_retries, 0);
  std::string last_problem;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    const BackendResponse response = chat_with_retries(backend, request, RetryPolicy{});
    ++calls;
    const MeasuredUsage usage = measure_usage(request, response, counter);
    const TokenCount tool_tokens = counter.count(join_declarations(request.function_declarations));
    StepCost cost = step_cost(usage.prompt_tokens > tool_tokens ? usage.prompt_tokens - tool_tokens : 0,
                              tool_tokens, usage.completion_tokens, options.pricing);
    cost.source = usage.source;
    ledger.append(cost);

    const std::string key(field);
    const std::string& text =
        response.function_call ? response.function_call->arguments : response.assistant_content;
    Json parsed;
    try {
      parsed = Json::parse(text);
    } catch (const nlohmann::json::parse_error&) {
      last_problem = "reply is not JSON";
      continue;
    }
    if (!parsed.is_object() || !parsed.contains(key) || !parsed.at(key).is_string()) {
      last_problem = fmt::format("reply has no string \"{}\"", field);
      continue;
    }
    const std::string status = parsed.at(key).get<std::string>();
    if (!valid(status)) {
      last_problem = fmt::format("\"{}\" is not a valid {}", status, field);
      continue;
    }
    JudgeCall out{status, {}};
    if (parsed.contains("content") && parsed.at("content").is_string()) {
      out.rationale = parsed.at("content").get<std::string>();
    }
    return out;
  }
  throw JudgeSchemaError(fmt::format("judge reply unusable after {} attempt(s): {}", attempts,
                                     last_problem));
}

bool valid_answer_status(const std::string& s) {
  return s == "Solved" || s == "Unsolved" || s == "Unsure";
}

Json execution_detail(const Trace& trace, std::string_view answer) {
  Json chain = Json::array();
  for (const auto& step : trace.steps) {
    Json assistant{{"role", "assistant"}, {"content", step.thought}};
    if (step.call) assistant["function_call"] = to_json(*step.call);
    chain.push_back(std::move(assistant));
    chain.push_back(Json{{"role", "tool"},
                         {"name", step.call ? step.call->name : ""},
                         {"content", step.observation}});
  }
  return Json{{"final_answer", answer}, {"execution", std::move(chain)}};
}

std::size_t level_index(std::size_t tools) {
  return static_cast<std::size_t>(level_for_tool_count(tools)) - 1;
}

enum class Outcome { Solved, Unsolved, NonSolvable };

Outcome outcome_of(const QueryRow& row) {
  if (row.verdict.task_status == TaskStatus::Unsolvable) return Outcome::NonSolvable;
  return row.verdict.answer_status == AnswerStatus::Solved ? Outcome::Solved : Outcome::Unsolved;
}

std::string optional_percent(const std::optional<Ratio>& r) {
  return r ? r->percent_string() : std::string("-");
}

std::string optional_percent(const std::optional<SignedRatio>& r) {
  return r ? r->percent_string() : std::string("-");
}

std::string mean_cents(const MethodAggregates& agg) {
  if (agg.queries == 0) return "-";
  const Ratio mean = agg.mean_cost_microcents();
  // Round to whole micro-cents before formatting.
  const std::uint64_t micro = static_cast<std::uint64_t>(
      (u128(mean.numerator) * 2u + mean.denominator) / (u128(mean.denominator) * 2u));
  return format_cents(MicroCents{micro});
}

}  // namespace

double Ratio::value() const { return denominator == 0 ? 0.0 : double(numerator) / double(denominator); }

std::string Ratio::percent_string() const {
  return tenths_string(permille_rounded(numerator, denominator), false);
}

bool Ratio::same_value(const Ratio& other) const {
  return u128(numerator) * other.denominator == u128(other.numerator) * denominator;
}

double SignedRatio::value() const {
  return denominator == 0 ? 0.0 : double(numerator) / double(denominator);
}

std::string SignedRatio::percent_string() const {
  const bool negative = numerator < 0;
  const std::uint64_t magnitude =
      negative ? std::uint64_t(0) - static_cast<std::uint64_t>(numerator) : std::uint64_t(numerator);
  return tenths_string(permille_rounded(magnitude, denominator), negative);
}

Ratio pass_rate_filtered(std::uint64_t solved, std::uint64_t unsolved) {
  if (solved + unsolved == 0) throw EmptyDenominator("pass rate over zero judged queries");
  return Ratio{solved, solved + unsolved};
}

Ratio pass_rate_toolbench(std::uint64_t non_solvable, std::uint64_t solved,
                          std::uint64_t unsolved) {
  const std::uint64_t total = non_solvable + solved + unsolved;
  if (total == 0) throw EmptyDenominator("pass rate over zero queries");
  return Ratio{non_solvable + solved, total};
}

std::string_view to_string(AnswerStatus status) {
  switch (status) {
    case AnswerStatus::Solved:
      return "Solved";
    case AnswerStatus::Unsolved:
      return "Unsolved";
    case AnswerStatus::Unsure:
      return "Unsure";
  }
  return "Unsure";
}

std::string_view to_string(TaskStatus status) {
  switch (status) {
    case TaskStatus::Solvable:
      return "Solvable";
    case TaskStatus::Unsolvable:
      return "Unsolvable";
    case TaskStatus::Unsure:
      return "Unsure";
  }
  return "Unsure";
}

AnswerStatus answer_status_from_string(std::string_view text) {
  if (text == "Solved") return AnswerStatus::Solved;
  if (text == "Unsolved") return AnswerStatus::Unsolved;
  if (text == "Unsure") return AnswerStatus::Unsure;
  throw ParseError(fmt::format("unknown answer_status '{}'", text));
}

TaskStatus task_status_from_string(std::string_view text) {
  if (text == "Solvable") return TaskStatus::Solvable;
  if (text == "Unsolvable") return TaskStatus::Unsolvable;
  if (text == "Unsure") return TaskStatus::Unsure;
  throw ParseError(fmt::format("unknown task_status '{}'", text));
}

Json to_json(const Verdict& verdict) {
  return Json{{"answer_status", to_string(verdict.answer_status)},
              {"task_status", to_string(verdict.task_status)},
              {"judge_rationale", verdict.judge_rationale}};
}

Verdict verdict_from_json(const Json& j) {
  Verdict v;
  v.answer_status = answer_status_from_string(j.at("answer_status").get<std::string>());
  v.task_status = task_status_from_string(j.value("task_status", std::string("Solvable")));
  v.judge_rationale = j.value("judge_rationale", std::string{});
  return v;
}

JudgeResult judge(const Trace& trace, Backend& backend, const JudgeOptions& options) {
  JudgeResult result;
  const std::string answer = trace.final == FinalKind::Answer && !trace.answer.empty()
                                 ? trace.answer
                                 : std::string(prompts::kNoAnswerMarker);

  std::string prompt = prompts::fill(prompts::kCheckAnswerStatus, "query", trace.query);
  prompt = prompts::fill(prompt, "answer", answer);
  static const Json check_decl =
      judge_declaration("check_answer_status", "answer_status", {"Solved", "Unsolved", "Unsure"});
  JudgeCall first = ask_judge(backend, options, prompt, check_decl, "answer_status",
                              valid_answer_status, result.ledger, result.calls);
  result.verdict.answer_status = answer_status_from_string(first.status);
  result.verdict.judge_rationale = first.rationale;
  if (result.verdict.answer_status != AnswerStatus::Unsure) return result;

  std::string detail_prompt = prompts::fill(prompts::kParseAnswerStatus, "query", trace.query);
  detail_prompt = prompts::fill(detail_prompt, "answer", execution_detail(trace, answer).dump());
  static const Json parse_decl =
      judge_declaration("parse_answer_status", "answer_status", {"Solved", "Unsolved", "Unsure"});
  JudgeCall second = ask_judge(backend, options, detail_prompt, parse_decl, "answer_status",
                               valid_answer_status, result.ledger, result.calls);
  result.verdict.answer_status = answer_status_from_string(second.status);
  result.verdict.judge_rationale = second.rationale;
  return result;
}

SolvabilityResult check_task_solvable(std::string_view query,
                                      const std::vector<std::string>& tool_names,
                                      Backend& backend, const JudgeOptions& options) {
  const Json task{{"query", query}, {"available_tools", tool_names}};
  const std::string prompt = prompts::fill(prompts::kCheckTaskSolvable, "task", task.dump());
  static const Json decl =
      judge_declaration("check_task_solvable", "task_status", {"Solvable", "Unsolvable", "Unsure"});
  SolvabilityResult result;
  std::size_t calls = 0;
  JudgeCall call = ask_judge(
      backend, options, prompt, decl, "task_status",
      [](const std::string& s) { return s == "Solvable" || s == "Unsolvable" || s == "Unsure"; },
      result.ledger, calls);
  result.status = task_status_from_string(call.status);
  result.rationale = call.rationale;
  return result;
}

Json to_json(const RatioPoint& point) {
  return Json{{"step", point.step}, {"registered", point.registered}, {"roster", point.roster}};
}

RatioPoint ratio_point_from_json(const Json& j) {
  return RatioPoint{j.at("step").get<std::size_t>(), j.at("registered").get<std::size_t>(),
                    j.at("roster").get<std::size_t>()};
}

std::vector<RatioPoint> registered_ratio_curve(std::span<const RegistrationEvent> history,
                                               std::size_t steps, std::size_t roster_size) {
  if (roster_size == 0) throw ZeroRoster("registered ratio needs a non-empty roster");
  std::vector<RatioPoint> curve;
  curve.reserve(steps);
  for (std::size_t s = 1; s <= steps; ++s) {
    curve.push_back(RatioPoint{s, registered_count_at(history, s), roster_size});
  }
  return curve;
}

std::vector<RatioPoint> registered_ratio_curve(const Trace& trace) {
  if (trace.variant == Variant::Eager) {
    if (trace.roster_size == 0) throw ZeroRoster("registered ratio needs a non-empty roster");
    std::vector<RatioPoint> curve;
    for (std::size_t s = 1; s <= trace.steps.size(); ++s) {
      curve.push_back(RatioPoint{s, trace.roster_size, trace.roster_size});
    }
    return curve;
  }
  return registered_ratio_curve(trace.registration_history, trace.steps.size(), trace.roster_size);
}

ToolScaleLevel level_for_tool_count(std::size_t candidate_tools) {
  if (candidate_tools <= 10) return ToolScaleLevel::Level1;
  if (candidate_tools <= 20) return ToolScaleLevel::Level2;
  return ToolScaleLevel::Level3;
}

std::optional<Ratio> MethodAggregates::pass_rate_filtered() const {
  if (solved + unsolved == 0) return std::nullopt;
  return ecoact::pass_rate_filtered(solved, unsolved);
}

std::optional<Ratio> MethodAggregates::pass_rate_toolbench() const {
  if (non_solvable + solved + unsolved == 0) return std::nullopt;
  return ecoact::pass_rate_toolbench(non_solvable, solved, unsolved);
}

Ratio MethodAggregates::mean_cost_microcents() const {
  return Ratio{total_cost.value, queries == 0 ? 1 : queries};
}

std::array<std::vector<const QueryRow*>, 3> bucket_by_tool_scale(const std::vector<QueryRow>& rows) {
  std::array<std::vector<const QueryRow*>, 3> buckets;
  for (const auto& row : rows) buckets[level_index(row.candidate_tools)].push_back(&row);
  return buckets;
}

MethodAggregates compute_aggregates(const std::vector<QueryRow>& rows) {
  MethodAggregates agg;
  for (const auto& row : rows) {
    ++agg.queries;
    agg.total_cost += row.agent_cost;
    agg.judge_cost += row.judge_cost;
    agg.input_tokens += row.input_tokens;
    LevelAggregate& level = agg.levels[level_index(row.candidate_tools)];
    ++level.queries;
    level.total_cost += row.agent_cost;
    level.input_tokens += row.input_tokens;
    switch (outcome_of(row)) {
      case Outcome::Solved:
        ++agg.solved;
        ++level.solved;
        break;
      case Outcome::Unsolved:
        ++agg.unsolved;
        ++level.unsolved;
        break;
      case Outcome::NonSolvable:
        ++agg.non_solvable;
        break;
    }
  }
  return agg;
}

std::optional<SignedRatio> SavingsRow::cost_savings() const {
  return savings(ecoact_cost.value, eager_cost.value);
}

std::optional<SignedRatio> SavingsRow::input_token_savings() const {
  return savings(ecoact_input_tokens, eager_input_tokens);
}

std::vector<SavingsRow> compute_savings(const MethodReport& ecoact, const MethodReport& eager) {
  std::map<std::string, const QueryRow*> eager_rows;
  for (const auto& row : eager.rows) eager_rows.emplace(row.query_id, &row);

  std::vector<SavingsRow> out(4);
  out[0].scope = "overall";
  for (std::size_t i = 1; i <= 3; ++i) out[i].scope = fmt::format("level{}", i);

  for (const auto& row : ecoact.rows) {
    const auto it = eager_rows.find(row.query_id);
    if (it == eager_rows.end()) continue;
    const QueryRow& base = *it->second;
    for (SavingsRow* target : {&out[0], &out[1 + level_index(row.candidate_tools)]}) {
      target->ecoact_cost += row.agent_cost;
      target->eager_cost += base.agent_cost;
      target->ecoact_input_tokens += row.input_tokens;
      target->eager_input_tokens += base.input_tokens;
    }
  }
  return out;
}

Json to_json(const QueryRow& row) {
  Json curve = Json::array();
  for (const auto& p : row.ratio_curve) curve.push_back(to_json(p));
  Json j{{"query_id", row.query_id},
         {"candidate_tools", row.candidate_tools},
         {"verdict", to_json(row.verdict)},
         {"final", to_string(row.final)},
         {"agent_cost_microcents", row.agent_cost.value},
         {"cost_cents", format_cents(row.agent_cost)},
         {"judge_cost_microcents", row.judge_cost.value},
         {"input_tokens", row.input_tokens},
         {"output_tokens", row.output_tokens},
         {"steps", row.steps},
         {"backend_calls", row.backend_calls},
         {"restart_count", row.restart_count},
         {"registered_ratio_curve", std::move(curve)}};
  if (!row.error.empty()) j["error"] = row.error;
  return j;
}

QueryRow query_row_from_json(const Json& j) {
  QueryRow row;
  row.query_id = j.at("query_id").get<std::string>();
  row.candidate_tools = j.at("candidate_tools").get<std::size_t>();
  row.verdict = verdict_from_json(j.at("verdict"));
  row.final = final_kind_from_string(j.at("final").get<std::string>());
  row.agent_cost = MicroCents{j.at("agent_cost_microcents").get<std::uint64_t>()};
  row.judge_cost = MicroCents{j.value("judge_cost_microcents", std::uint64_t{0})};
  row.input_tokens = j.at("input_tokens").get<TokenCount>();
  row.output_tokens = j.at("output_tokens").get<TokenCount>();
  row.steps = j.at("steps").get<std::size_t>();
  row.backend_calls = j.value("backend_calls", row.steps);
  row.restart_count = j.value("restart_count", std::size_t{0});
  for (const auto& p : j.at("registered_ratio_curve")) row.ratio_curve.push_back(ratio_point_from_json(p));
  row.error = j.value("error", std::string{});
  return row;
}

Json to_json(const MethodAggregates& agg) {
  const auto filtered = agg.pass_rate_filtered();
  const auto toolbench = agg.pass_rate_toolbench();
  Json levels = Json::array();
  for (std::size_t i = 0; i < 3; ++i) {
    const LevelAggregate& l = agg.levels[i];
    Json entry{{"level", i + 1},
               {"queries", l.queries},
               {"solved", l.solved},
               {"unsolved", l.unsolved},
               {"total_cost_microcents", l.total_cost.value},
               {"input_tokens", l.input_tokens}};
    if (l.solved + l.unsolved > 0) {
      entry["pass_rate"] = pass_rate_filtered(l.solved, l.unsolved).percent_string();
    }
    levels.push_back(std::move(entry));
  }
  Json j{{"queries", agg.queries},
         {"solved", agg.solved},
         {"unsolved", agg.unsolved},
         {"non_solvable", agg.non_solvable},
         {"pass_rate_filtered", filtered ? Json(filtered->percent_string()) : Json(nullptr)},
         {"pass_rate_toolbench", toolbench ? Json(toolbench->percent_string()) : Json(nullptr)},
         {"total_cost_microcents", agg.total_cost.value},
         {"mean_cost_cents", mean_cents(agg)},
         {"judge_cost_microcents", agg.judge_cost.value},
         {"input_tokens", agg.input_tokens},
         {"levels", std::move(levels)}};
  return j;
}

Json to_json(const BenchReport& report) {
  Json methods = Json::array();
  for (const auto& m : report.methods) {
    Json rows = Json::array();
    for (const auto& r : m.rows) rows.push_back(to_json(r));
    methods.push_back(Json{{"method", m.method},
                           {"engine", to_string(m.engine)},
                           {"variant", to_string(m.variant)},
                           {"aggregates", to_json(m.aggregates)},
                           {"per_query", std::move(rows)}});
  }
  Json savings_rows = Json::array();
  for (const auto& s : report.savings) {
    const auto cost = s.cost_savings();
    const auto tokens = s.input_token_savings();
    savings_rows.push_back(Json{{"scope", s.scope},
                                {"ecoact_cost_microcents", s.ecoact_cost.value},
                                {"eager_cost_microcents", s.eager_cost.value},
                                {"ecoact_input_tokens", s.ecoact_input_tokens},
                                {"eager_input_tokens", s.eager_input_tokens},
                                {"cost_savings", cost ? Json(cost->percent_string()) : Json(nullptr)},
                                {"input_token_savings",
                                 tokens ? Json(tokens->percent_string()) : Json(nullptr)}});
  }
  return Json{{"suite_id", report.suite_id},
              {"methods", std::move(methods)},
              {"savings", std::move(savings_rows)}};
}

BenchReport bench_report_from_json(const Json& j) {
  BenchReport report;
  report.suite_id = j.at("suite_id").get<std::string>();
  for (const auto& m : j.at("methods")) {
    MethodReport method;
    method.method = m.at("method").get<std::string>();
    method.engine = engine_from_string(m.at("engine").get<std::string>());
    method.variant = variant_from_string(m.at("variant").get<std::string>());
    for (const auto& r : m.at("per_query")) method.rows.push_back(query_row_from_json(r));
    method.aggregates = compute_aggregates(method.rows);
    report.methods.push_back(std::move(method));
  }
  for (const auto& s : j.value("savings", Json::array())) {
    SavingsRow row;
    row.scope = s.at("scope").get<std::string>();
    row.ecoact_cost = MicroCents{s.at("ecoact_cost_microcents").get<std::uint64_t>()};
    row.eager_cost = MicroCents{s.at("eager_cost_microcents").get<std::uint64_t>()};
    row.ecoact_input_tokens = s.at("ecoact_input_tokens").get<TokenCount>();
    row.eager_input_tokens = s.at("eager_input_tokens").get<TokenCount>();
    report.savings.push_back(std::move(row));
  }
  return report;
}

std::string render_table(const BenchReport& report) {
  std::string out = fmt::format("suite: {}\n\n", report.suite_id);
  out += fmt::format("{:<22} {:>7} {:>7} {:>9} {:>9} {:>12}\n", "method", "queries", "PR (%)",
                     "PR-TB (%)", "Cost (¢)", "input tok");
  for (const auto& m : report.methods) {
    const auto& a = m.aggregates;
    out += fmt::format("{:<22} {:>7} {:>7} {:>9} {:>9} {:>12}\n", m.method, a.queries,
                       optional_percent(a.pass_rate_filtered()),
                       optional_percent(a.pass_rate_toolbench()), mean_cents(a), a.input_tokens);
  }
  out += "\nper level (PR % / mean cost ¢)\n";
  out += fmt::format("{:<22} {:>16} {:>16} {:>16}\n", "method", "level1", "level2", "level3");
  for (const auto& m : report.methods) {
    std::string cells[3];
    for (std::size_t i = 0; i < 3; ++i) {
      const LevelAggregate& l = m.aggregates.levels[i];
      if (l.queries == 0) {
        cells[i] = "-";
        continue;
      }
      const std::string pr =
          l.solved + l.unsolved > 0 ? pass_rate_filtered(l.solved, l.unsolved).percent_string() : "-";
      const std::uint64_t mean = (l.total_cost.value * 2 + l.queries) / (2 * l.queries);
      cells[i] = fmt::format("{} / {}", pr, format_cents(MicroCents{mean}));
    }
    out += fmt::format("{:<22} {:>16} {:>16} {:>16}\n", m.method, cells[0], cells[1], cells[2]);
  }
  if (!report.savings.empty()) {
    out += "\nsavings of lazy registration vs eager (%)\n";
    out += fmt::format("{:<10} {:>10} {:>14}\n", "scope", "cost", "input tokens");
    for (const auto& s : report.savings) {
      out += fmt::format("{:<10} {:>10} {:>14}\n", s.scope, optional_percent(s.cost_savings()),
                         optional_percent(s.input_token_savings()));
    }
  }
  return out;
}

std::string render_level_csv(const BenchReport& report) {
  std::string out = "level,method,queries,pass_rate,mean_cost_cents,total_cost_cents\n";
  for (std::size_t i = 0; i < 3; ++i) {
    for (const auto& m : report.methods) {
      const LevelAggregate& l = m.aggregates.levels[i];
      const std::string pr =
          l.solved + l.unsolved > 0 ? pass_rate_filtered(l.solved, l.unsolved).percent_string() : "";
      const std::string mean =
          l.queries > 0 ? format_cents(MicroCents{(l.total_cost.value * 2 + l.queries) / (2 * l.queries)})
                        : "";
      out += fmt::format("{},{},{},{},{},{}\n", i + 1, m.method, l.queries, pr, mean,
                         format_cents(l.total_cost));
    }
  }
  return out;
}

std::string render_ratio_csv(const BenchReport& report) {
  std::string out = "method,query_id,step,registered,roster,ratio\n";
  for (const auto& m : report.methods) {
    for (const auto& row : m.rows) {
      for (const auto& p : row.ratio_curve) {
        out += fmt::format("{},{},{},{},{},{:.6f}\n", m.method, row.query_id, p.step, p.registered,
                           p.roster, p.value());
      }
    }
  }
  return out;
}

}  // namespace ecoact
