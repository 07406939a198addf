// SPDX-License-Identifier: Apache-2.0
#include "ecoact/reasoning.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "ecoact/errors.hpp"
#include "ecoact/prompts.hpp"

namespace ecoact {
namespace {

constexpr std::string_view kTruncationMarker = " ...[truncated]";

std::string error_observation(std::string_view message) {
  return Json{{"error", message}, {"response", ""}}.dump();
}

PromptVariant prompt_variant(Variant v) {
  return v == Variant::EcoAct ? PromptVariant::EcoAct : PromptVariant::Eager;
}

RegistrationState initial_state(const ToolCorpus& corpus, const RunConfig& config) {
  return config.variant == Variant::EcoAct ? RegistrationState::lazy(corpus, config.mode, config.multi)
                                           : RegistrationState::eager(corpus);
}

struct PathState {
  RegistrationState registration;
  std::vector<Step> steps;
  std::size_t consecutive_malformed{};
};

// Shared by both engines: turns one backend call into one Step.
class StepExecutor {
 public:
  StepExecutor(std::string_view query, const ToolCorpus& corpus, Backend& backend,
               const RunConfig& config, const RunServices& services)
      : query_(query),
        corpus_(corpus),
        backend_(backend),
        config_(config),
        counter_(services.counter != nullptr ? *services.counter : default_counter()),
        executor_(services.executor != nullptr ? *services.executor : fallback_executor_) {
    retry_.retries = config.retries;
    retry_.backoff = std::chrono::milliseconds(config.backoff_ms);
    retry_.sleep = services.sleep;
  }

  /// Extends `path` by one backend call and records it in `trace`.
  const Step& advance(PathState& path, std::optional<std::string> annotation, std::size_t node_id,
                      std::size_t parent_id, Trace& trace) {
    BackendRequest request;
    request.model_id = config_.model_id;
    request.messages = assemble_prompt(path.registration, corpus_, query_, path.steps,
                                       prompt_variant(config_.variant));
    if (annotation) request.messages.push_back(Message{Role::User, *annotation, std::nullopt, {}});
    request.function_declarations = callable_tools(path.registration, corpus_);
    request.temperature = config_.temperature;
    request.seed = config_.seed;

    BackendResponse response = chat_with_retries(backend_, request, retry_);

    const MeasuredUsage usage = measure_usage(request, response, counter_);
    const TokenCount tool_tokens = counter_.count(join_declarations(request.function_declarations));
    const TokenCount context_tokens =
        usage.prompt_tokens > tool_tokens ? usage.prompt_tokens - tool_tokens : 0;
    StepCost cost = step_cost(context_tokens, tool_tokens, usage.completion_tokens, config_.pricing);
    cost.source = usage.source;
    trace.ledger.append(cost);
    cost.step_index = trace.ledger.size();

    Step step;
    step.index = path.steps.size() + 1;
    step.thought = response.assistant_content;
    step.call = response.function_call;
    step.action = parse_action(response, path.registration.meta_tool_enabled());
    step.cost = cost;
    step.annotation = std::move(annotation);
    step.observation = execute(path, step);

    path.consecutive_malformed =
        std::holds_alternative<MalformedOutput>(step.action) ? path.consecutive_malformed + 1 : 0;
    path.steps.push_back(step);

    CallRecord record;
    record.node_id = node_id;
    record.parent_id = parent_id;
    record.depth = step.index;
    record.request = std::move(request);
    record.response = std::move(response);
    record.step = path.steps.back();
    trace.calls.push_back(std::move(record));
    return path.steps.back();
  }

 private:
  std::string execute(PathState& path, const Step& step) {
    return std::visit(
        [&](const auto& action) -> std::string {
          using T = std::decay_t<decltype(action)>;
          if constexpr (std::is_same_v<T, RegisterTool>) {
            return path.registration.register_tools(action.names, step.index, corpus_).observation_text;
          } else if constexpr (std::is_same_v<T, InvokeTool>) {
            return invoke(path.registration, action);
          } else if constexpr (std::is_same_v<T, FinishAction>) {
            return std::string(action.kind == FinishKind::GiveAnswer ? prompts::kFinishObservation
                                                                     : prompts::kGiveUpObservation);
          } else {
            const bool lazy = path.registration.meta_tool_enabled();
            return error_observation(fmt::format(
                "{}. Reply with exactly one function call: {}", action.reason,
                lazy ? "register a tool with tool_register, call a registered tool, or call Finish"
                     : "call one of the declared functions or Finish"));
          }
        },
        step.action);
  }

  std::string invoke(const RegistrationState& registration, const InvokeTool& action) {
    if (!registration.is_registered(action.name)) {
      if (registration.meta_tool_enabled() && corpus_.contains(action.name)) {
        return error_observation(fmt::format(
            "function '{}' is not registered; call tool_register with its name before using it",
            action.name));
      }
      return error_observation(fmt::format("no such function: {}", action.name));
    }
    std::string observation;
    try {
      observation = executor_.execute(action.name, action.arguments);
    } catch (const std::exception& e) {
      return error_observation(fmt::format("function '{}' failed: {}", action.name, e.what()));
    }
    if (counter_.count(observation) > config_.obs_token_limit) {
      observation.resize(prefix_bytes_within(counter_, observation, config_.obs_token_limit));
      observation += kTruncationMarker;
    }
    return observation;
  }

  std::string_view query_;
  const ToolCorpus& corpus_;
  Backend& backend_;
  const RunConfig& config_;
  const TokenCounter& counter_;
  MockExecutor fallback_executor_;
  Executor& executor_;
  RetryPolicy retry_;
};

void finish_trace(Trace& trace, const PathState& path) {
  trace.steps = path.steps;
  trace.registration_history = path.registration.history();
  trace.registered = path.registration.registered();
  trace.roster_size = path.registration.roster().size();
}

bool is_answer(const Step& step) {
  const auto* f = std::get_if<FinishAction>(&step.action);
  return f != nullptr && f->kind == FinishKind::GiveAnswer;
}

bool is_give_up(const Step& step) {
  const auto* f = std::get_if<FinishAction>(&step.action);
  return f != nullptr && f->kind == FinishKind::GiveUpAndRestart;
}

bool is_malformed(const Step& step) { return std::holds_alternative<MalformedOutput>(step.action); }

std::string failure_summary(const Step& step) {
  if (step.call) return to_json(*step.call).dump();
  return Json{{"reply", step.thought}}.dump();
}

}  // namespace

Json to_json(const Action& action) {
  return std::visit(
      [](const auto& a) -> Json {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, RegisterTool>) {
          return Json{{"type", "register"}, {"names", a.names}};
        } else if constexpr (std::is_same_v<T, InvokeTool>) {
          return Json{{"type", "invoke"}, {"name", a.name}, {"arguments", a.arguments}};
        } else if constexpr (std::is_same_v<T, FinishAction>) {
          return a.kind == FinishKind::GiveAnswer
                     ? Json{{"type", "finish"}, {"kind", "give_answer"}, {"answer", a.answer}}
                     : Json{{"type", "finish"}, {"kind", "give_up_and_restart"}};
        } else {
          return Json{{"type", "malformed"}, {"reason", a.reason}};
        }
      },
      action);
}

Action action_from_json(const Json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "register") return RegisterTool{j.at("names").get<std::vector<std::string>>()};
  if (type == "invoke") return InvokeTool{j.at("name").get<std::string>(), j.at("arguments")};
  if (type == "finish") {
    if (j.at("kind") == "give_answer") {
      return FinishAction{FinishKind::GiveAnswer, j.value("answer", std::string{})};
    }
    return FinishAction{FinishKind::GiveUpAndRestart, {}};
  }
  if (type == "malformed") return MalformedOutput{j.value("reason", std::string{})};
  throw ParseError(fmt::format("unknown action type '{}'", type));
}

Action parse_action(const BackendResponse& response, bool meta_tool_enabled) {
  if (!response.function_call) return MalformedOutput{"the reply contains no function call"};
  const FunctionCall& call = *response.function_call;

  Json arguments = Json::object();
  const bool blank = std::all_of(call.arguments.begin(), call.arguments.end(),
                                 [](unsigned char c) { return std::isspace(c) != 0; });
  if (!blank) {
    try {
      arguments = Json::parse(call.arguments);
    } catch (const nlohmann::json::parse_error&) {
      return MalformedOutput{fmt::format("the arguments of '{}' are not valid JSON", call.name)};
    }
    if (!arguments.is_object()) {
      return MalformedOutput{fmt::format("the arguments of '{}' must be a JSON object", call.name)};
    }
  }

  if (call.name == kFinishToolName) {
    const std::string kind = arguments.value("return_type", std::string{});
    if (kind == "give_answer") {
      std::string answer;
      if (arguments.contains("final_answer")) {
        const auto& a = arguments.at("final_answer");
        answer = a.is_string() ? a.get<std::string>() : a.dump();
      }
      return FinishAction{FinishKind::GiveAnswer, std::move(answer)};
    }
    if (kind == "give_up_and_restart") return FinishAction{FinishKind::GiveUpAndRestart, {}};
    return MalformedOutput{"Finish needs return_type \"give_answer\" or \"give_up_and_restart\""};
  }
  if (meta_tool_enabled && call.name == kMetaToolName) {
    RegisterTool action;
    std::string reason;
    // Unparseable requests become an empty registration, which register_tools
    // answers with a corrective observation.
    if (!parse_register_arguments(arguments, action.names, reason)) action.names.clear();
    return action;
  }
  return InvokeTool{call.name, std::move(arguments)};
}

std::string_view to_string(FinalKind kind) {
  switch (kind) {
    case FinalKind::Answer:
      return "answer";
    case FinalKind::GiveUp:
      return "give_up";
    case FinalKind::BudgetExhausted:
      return "budget_exhausted";
  }
  return "budget_exhausted";
}

FinalKind final_kind_from_string(std::string_view text) {
  if (text == "answer") return FinalKind::Answer;
  if (text == "give_up") return FinalKind::GiveUp;
  if (text == "budget_exhausted") return FinalKind::BudgetExhausted;
  throw ParseError(fmt::format("unknown final kind '{}'", text));
}

std::vector<Message> assemble_prompt(const RegistrationState& state, const ToolCorpus& corpus,
                                     std::string_view query, std::span<const Step> history,
                                     PromptVariant variant) {
  std::vector<Message> messages;
  messages.reserve(2 + 3 * history.size());
  if (variant == PromptVariant::EcoAct) {
    messages.push_back({Role::System, std::string(prompts::kEcoActSystem), std::nullopt, {}});
    messages.push_back(
        {Role::User, fmt::format("{}\n\n{}", query, state.render_roster(corpus)), std::nullopt, {}});
  } else {
    messages.push_back({Role::System, std::string(prompts::kEagerSystem), std::nullopt, {}});
    messages.push_back({Role::User, std::string(query), std::nullopt, {}});
  }
  for (const auto& step : history) {
    if (step.annotation) messages.push_back({Role::User, *step.annotation, std::nullopt, {}});
    messages.push_back({Role::Assistant, step.thought, step.call, {}});
    messages.push_back({Role::Tool, step.observation, std::nullopt, step.call ? step.call->name : ""});
  }
  return messages;
}

Trace run_react(std::string_view query, const ToolCorpus& corpus, Backend& backend,
                const RunConfig& config, const RunServices& services) {
  if (config.max_steps < 1) throw ConfigError("max_steps must be >= 1");
  Trace trace;
  trace.query = std::string(query);
  trace.engine = Engine::React;
  trace.variant = config.variant;

  StepExecutor executor(query, corpus, backend, config, services);
  PathState path{initial_state(corpus, config), {}, 0};
  trace.final = FinalKind::BudgetExhausted;

  while (path.steps.size() < config.max_steps) {
    const std::size_t node = path.steps.size() + 1;
    const Step& step = executor.advance(path, std::nullopt, node, node - 1, trace);
    trace.returned_path.push_back(node);
    if (is_answer(step)) {
      trace.final = FinalKind::Answer;
      trace.answer = std::get<FinishAction>(step.action).answer;
      break;
    }
    if (is_give_up(step)) {
      trace.final = FinalKind::GiveUp;
      break;
    }
    if (is_malformed(step) && path.consecutive_malformed >= config.malformed_limit) break;
  }
  finish_trace(trace, path);
  trace.tree_nodes = trace.steps.size() + 1;
  return trace;
}

Trace run_dfsdt(std::string_view query, const ToolCorpus& corpus, Backend& backend,
                const RunConfig& config, const RunServices& services) {
  if (config.max_steps < 1) throw ConfigError("max_steps must be >= 1");
  if (config.max_total_steps < 1) throw ConfigError("max_total_steps must be >= 1");

  struct Node {
    std::size_t parent{};
    PathState path;  // state after this node's step; the root holds the initial state
    std::vector<std::size_t> children;
    std::vector<std::size_t> failed_children;
  };

  Trace trace;
  trace.query = std::string(query);
  trace.engine = Engine::Dfsdt;
  trace.variant = config.variant;

  StepExecutor executor(query, corpus, backend, config, services);
  std::vector<Node> nodes;
  nodes.push_back(Node{0, PathState{initial_state(corpus, config), {}, 0}, {}, {}});

  const auto has_budget = [&](std::size_t id) {
    return config.dfsdt_max_children == 0 || nodes[id].children.size() < config.dfsdt_max_children;
  };
  const auto step_of = [&](std::size_t id) -> const Step& { return nodes[id].path.steps.back(); };

  std::size_t current = 0;
  std::size_t last = 0;
  bool exhausted_tree = false;

  while (trace.calls.size() < config.max_total_steps && !exhausted_tree) {
    std::optional<std::string> annotation;
    if (!nodes[current].failed_children.empty()) {
      std::string text =
          "Previous attempt failed. This is not your first try from this state; these "
          "continuations already failed:";
      for (std::size_t i = 0; i < nodes[current].failed_children.size(); ++i) {
        text += fmt::format("\n{}. {}", i + 1, failure_summary(step_of(nodes[current].failed_children[i])));
      }
      text += "\nTry something different from them.";
      annotation = std::move(text);
    }

    PathState path = nodes[current].path;
    const std::size_t id = nodes.size();
    const Step step = executor.advance(path, std::move(annotation), id, current, trace);
    nodes.push_back(Node{current, std::move(path), {}, {}});
    nodes[current].children.push_back(id);
    last = id;

    if (is_answer(step)) {
      trace.final = FinalKind::Answer;
      trace.answer = std::get<FinishAction>(step.action).answer;
      break;
    }

    const bool malformed_dead_end =
        is_malformed(step) && nodes[id].path.consecutive_malformed >= config.malformed_limit;
    const bool failed = is_give_up(step) || malformed_dead_end || step.index >= config.max_steps;
    if (!failed) {
      current = id;
      continue;
    }

    // Backtrack. A run of malformed replies is abandoned as a whole.
    std::size_t failed_node = id;
    if (malformed_dead_end) {
      while (nodes[failed_node].parent != 0 && is_malformed(step_of(nodes[failed_node].parent))) {
        failed_node = nodes[failed_node].parent;
      }
    }
    std::size_t target = nodes[failed_node].parent;
    nodes[target].failed_children.push_back(failed_node);
    while (!has_budget(target)) {
      if (target == 0) {
        exhausted_tree = true;
        break;
      }
      failed_node = target;
      target = nodes[target].parent;
      nodes[target].failed_children.push_back(failed_node);
    }
    ++trace.restart_count;
    current = target;
  }

  if (trace.final != FinalKind::Answer) trace.final = FinalKind::BudgetExhausted;
  finish_trace(trace, nodes[last].path);
  for (std::size_t n = last; n != 0; n = nodes[n].parent) trace.returned_path.push_back(n);
  std::reverse(trace.returned_path.begin(), trace.returned_path.end());
  trace.tree_nodes = nodes.size();
  return trace;
}

Trace run_eager_baseline(std::string_view query, const ToolCorpus& corpus, Backend& backend,
                         const RunConfig& config, const RunServices& services) {
  RunConfig eager = config;
  eager.variant = Variant::Eager;
  return run_trace(query, corpus, backend, eager, services);
}

Trace run_trace(std::string_view query, const ToolCorpus& corpus, Backend& backend,
                const RunConfig& config, const RunServices& services) {
  return config.engine == Engine::React ? run_react(query, corpus, backend, config, services)
                                        : run_dfsdt(query, corpus, backend, config, services);
}

std::vector<RegistrationEvent> registration_sequence(const Trace& trace) {
  return trace.registration_history;
}

}  // namespace ecoact
