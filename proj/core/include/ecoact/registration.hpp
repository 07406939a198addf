// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ecoact/common.hpp"
#include "ecoact/tool_corpus.hpp"

namespace ecoact {

inline constexpr std::string_view kMetaToolName = "tool_register";
inline constexpr std::string_view kFinishToolName = "Finish";
inline constexpr std::string_view kRosterHeader = "Available tools (register before use):";

enum class MultiRegistrationPolicy { Single, Multiple };
std::string_view to_string(MultiRegistrationPolicy policy);
MultiRegistrationPolicy multi_from_string(std::string_view text);

enum class RegistrationEventKind {
  Registered,         // newly added to the action space
  AlreadyRegistered,  // idempotent repeat
  UnknownTool,        // not in the roster
  ArityRejected       // SINGLE mode received != 1 name
};
std::string_view to_string(RegistrationEventKind kind);
RegistrationEventKind event_kind_from_string(std::string_view text);

struct RegistrationEvent {
  std::size_t step{};
  std::string tool_name;
  RegistrationEventKind outcome{};

  friend bool operator==(const RegistrationEvent&, const RegistrationEvent&) = default;
};

struct RegistrationOutcome {
  std::vector<std::string> accepted;
  std::vector<std::pair<std::string, std::string>> rejected;  // (name, reason)
  std::string observation_text;
};

/// The evolving action space of one trace (or one DFSDT path).
///
/// Invariants: registered is a subset of roster, registered only grows, and
/// a lazy state starts with nothing registered so the callable set is
/// exactly {tool_register, Finish}.
class RegistrationState {
 public:
  /// Lazy registration: roster = every corpus name, nothing registered.
  static RegistrationState lazy(const ToolCorpus& corpus, RegistrationContextMode mode,
                                MultiRegistrationPolicy multi);
  /// Eager baseline: everything registered up front, no meta-tool.
  static RegistrationState eager(const ToolCorpus& corpus);

  const std::vector<std::string>& roster() const { return roster_; }
  const std::vector<std::string>& registered() const { return registered_; }
  const std::vector<RegistrationEvent>& history() const { return history_; }
  RegistrationContextMode mode() const { return mode_; }
  MultiRegistrationPolicy multi() const { return multi_; }
  bool meta_tool_enabled() const { return meta_tool_enabled_; }
  bool is_registered(std::string_view name) const;

  /// Applies a tool_register call made at `step`. Never throws on bad input:
  /// every problem becomes part of the returned observation.
  RegistrationOutcome register_tools(std::span<const std::string> requested, std::size_t step,
                                     const ToolCorpus& corpus);

  /// Roster block placed in the user message.
  std::string render_roster(const ToolCorpus& corpus) const;

 private:
  std::vector<std::string> roster_;
  std::vector<std::string> registered_;
  std::unordered_set<std::string> registered_set_;
  std::vector<RegistrationEvent> history_;
  RegistrationContextMode mode_{RegistrationContextMode::NameOnly};
  MultiRegistrationPolicy multi_{MultiRegistrationPolicy::Single};
  bool meta_tool_enabled_{true};
};

RegistrationState init_state(const ToolCorpus& corpus, RegistrationContextMode mode,
                             MultiRegistrationPolicy multi);

inline RegistrationOutcome register_tools(RegistrationState& state, const ToolCorpus& corpus,
                                          std::span<const std::string> requested,
                                          std::size_t step) {
  return state.register_tools(requested, step, corpus);
}

/// Byte-fixed wire declaration of the meta-tool for the given policy.
const std::string& meta_tool_declaration(MultiRegistrationPolicy policy);
/// Byte-fixed wire declaration of the built-in Finish action.
const std::string& finish_declaration();

/// Declarations sent to the backend this step, in order: meta-tool (lazy
/// states only), Finish, then registered tools in registration order.
std::vector<std::string> callable_tools(const RegistrationState& state, const ToolCorpus& corpus);

/// Extracts requested names from tool_register arguments. Accepts
/// "function_name" (string) and "function_names" (array of strings) in either
/// policy; the arity check is register_tools' job. Returns false with a reason
/// when neither key yields names.
bool parse_register_arguments(const Json& arguments, std::vector<std::string>& names,
                              std::string& reason);

/// Number of Registered events in `history` with step <= `step`.
std::size_t registered_count_at(std::span<const RegistrationEvent> history, std::size_t step);

Json to_json(const RegistrationEvent& event);
RegistrationEvent registration_event_from_json(const Json& j);

}  // namespace ecoact
