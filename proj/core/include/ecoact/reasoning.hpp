// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ecoact/backend.hpp"
#include "ecoact/cost_model.hpp"
#include "ecoact/executor.hpp"
#include "ecoact/registration.hpp"
#include "ecoact/run_config.hpp"
#include "ecoact/token_counter.hpp"
#include "ecoact/tool_corpus.hpp"

namespace ecoact {

struct RegisterTool {
  std::vector<std::string> names;
  friend bool operator==(const RegisterTool&, const RegisterTool&) = default;
};

struct InvokeTool {
  std::string name;
  Json arguments;
  friend bool operator==(const InvokeTool&, const InvokeTool&) = default;
};

enum class FinishKind { GiveAnswer, GiveUpAndRestart };

struct FinishAction {
  FinishKind kind{FinishKind::GiveAnswer};
  std::string answer;
  friend bool operator==(const FinishAction&, const FinishAction&) = default;
};

/// The model produced no usable function call. Handled in-band.
struct MalformedOutput {
  std::string reason;
  friend bool operator==(const MalformedOutput&, const MalformedOutput&) = default;
};

using Action = std::variant<RegisterTool, InvokeTool, FinishAction, MalformedOutput>;

Json to_json(const Action& action);
Action action_from_json(const Json& j);

/// Interprets a backend reply. `meta_tool_enabled` decides whether a
/// tool_register call is the meta-action or just another (unknown) tool.
Action parse_action(const BackendResponse& response, bool meta_tool_enabled);

struct Step {
  std::size_t index{};  // 1-based position along the path
  std::string thought;
  std::optional<FunctionCall> call;  // as emitted; absent for pure-text replies
  Action action;
  std::string observation;
  StepCost cost;
  /// DFSDT: user message that preceded this step's request (failed siblings).
  std::optional<std::string> annotation;
};

enum class FinalKind { Answer, GiveUp, BudgetExhausted };
std::string_view to_string(FinalKind kind);
FinalKind final_kind_from_string(std::string_view text);

/// One backend call. ReAct has one per step; DFSDT has one per tree node.
struct CallRecord {
  std::size_t node_id{};    // 1-based; 0 is the DFSDT root (never a call)
  std::size_t parent_id{};  // 0 for first-level nodes
  std::size_t depth{};      // == Step::index
  BackendRequest request;
  BackendResponse response;
  Step step;
};

struct Trace {
  std::string query;
  Engine engine{Engine::React};
  Variant variant{Variant::EcoAct};
  std::vector<Step> steps;  // returned path
  FinalKind final{FinalKind::BudgetExhausted};
  std::string answer;
  CostLedger ledger;  // one entry per backend call, in call order
  std::vector<RegistrationEvent> registration_history;  // along the returned path
  std::vector<std::string> registered;                  // final registered set
  std::size_t roster_size{};
  std::size_t restart_count{};
  std::size_t tree_nodes{};  // DFSDT: includes the root; ReAct: steps + 1
  std::vector<std::size_t> returned_path;  // node ids
  std::vector<CallRecord> calls;
};

enum class PromptVariant { EcoAct, Eager };

/// System + user message followed, per step, by the optional DFSDT
/// annotation, the assistant function call and the tool observation.
/// Byte-deterministic in its inputs.
std::vector<Message> assemble_prompt(const RegistrationState& state, const ToolCorpus& corpus,
                                     std::string_view query, std::span<const Step> history,
                                     PromptVariant variant);

/// Collaborators of a run. Null members fall back to defaults: a
/// MockExecutor with no fixtures, the rule counter, and std::this_thread
/// sleeping between retries.
struct RunServices {
  Executor* executor{nullptr};
  const TokenCounter* counter{nullptr};
  std::function<void(std::chrono::milliseconds)> sleep;
};

Trace run_react(std::string_view query, const ToolCorpus& corpus, Backend& backend,
                const RunConfig& config, const RunServices& services = {});

Trace run_dfsdt(std::string_view query, const ToolCorpus& corpus, Backend& backend,
                const RunConfig& config, const RunServices& services = {});

/// config.engine with variant forced to Eager.
Trace run_eager_baseline(std::string_view query, const ToolCorpus& corpus, Backend& backend,
                         const RunConfig& config, const RunServices& services = {});

/// Dispatches on config.engine (and honors config.variant).
Trace run_trace(std::string_view query, const ToolCorpus& corpus, Backend& backend,
                const RunConfig& config, const RunServices& services = {});

/// Registration events along the returned path, in order.
std::vector<RegistrationEvent> registration_sequence(const Trace& trace);

}  // namespace ecoact
