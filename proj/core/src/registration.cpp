// SPDX-License-Identifier: Apache-2.0
#include "ecoact/registration.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "ecoact/errors.hpp"

namespace ecoact {
namespace {

constexpr std::string_view kSingleDescription =
    "I have given you a list of functions (names), please call this function to choose one of "
    "them that may be useful. The function you choose should be the one that you think is most "
    "useful in the current state. After you make function selection using this function, I will "
    "give you the detailed information of your selected function. You can then call the function "
    "you selected with appropriate inputs if you think the function is useful.";

constexpr std::string_view kMultipleDescription =
    "I have given you a list of functions (names), please call this function to choose the ones "
    "that may be useful. You may choose as many functions as you need in one call. After you make "
    "the selection using this function, I will give you the detailed information of every "
    "selected function. You can then call the functions you selected with appropriate inputs if "
    "you think they are useful.";

std::string build_meta_declaration(MultiRegistrationPolicy policy) {
  Json properties;
  std::string required;
  if (policy == MultiRegistrationPolicy::Single) {
    properties["function_name"] = Json{{"type", "string"},
                                       {"description", "the name of the function you want to call"}};
    required = "function_name";
  } else {
    properties["function_names"] =
        Json{{"type", "array"},
             {"items", Json{{"type", "string"}}},
             {"description", "the names of the functions you want to register"}};
    required = "function_names";
  }
  Json decl{{"name", kMetaToolName},
            {"description", policy == MultiRegistrationPolicy::Single ? kSingleDescription
                                                                       : kMultipleDescription},
            {"parameters",
             Json{{"type", "object"},
                  {"properties", std::move(properties)},
                  {"required", Json::array({required})}}}};
  return decl.dump();
}

std::string build_finish_declaration() {
  Json decl{
      {"name", kFinishToolName},
      {"description",
       "Call this function at the end of the task. Use return_type give_answer with a "
       "final_answer that contains everything the user needs, or give_up_and_restart if the task "
       "cannot be completed from the current state."},
      {"parameters",
       Json{{"type", "object"},
            {"properties",
             Json{{"return_type",
                   Json{{"type", "string"},
                        {"enum", Json::array({"give_answer", "give_up_and_restart"})}}},
                  {"final_answer",
                   Json{{"type", "string"},
                        {"description",
                         "The final answer shown to the user. Required when return_type is "
                         "give_answer."}}}}},
            {"required", Json::array({"return_type"})}}}};
  return decl.dump();
}

}  // namespace

std::string_view to_string(MultiRegistrationPolicy policy) {
  return policy == MultiRegistrationPolicy::Single ? "single" : "multiple";
}

MultiRegistrationPolicy multi_from_string(std::string_view text) {
  if (text == "single") return MultiRegistrationPolicy::Single;
  if (text == "multiple") return MultiRegistrationPolicy::Multiple;
  throw ConfigError(fmt::format("unknown registration policy '{}'", text));
}

std::string_view to_string(RegistrationEventKind kind) {
  switch (kind) {
    case RegistrationEventKind::Registered:
      return "registered";
    case RegistrationEventKind::AlreadyRegistered:
      return "already_registered";
    case RegistrationEventKind::UnknownTool:
      return "unknown_tool";
    case RegistrationEventKind::ArityRejected:
      return "arity_rejected";
  }
  return "registered";
}

RegistrationEventKind event_kind_from_string(std::string_view text) {
  for (auto k : {RegistrationEventKind::Registered, RegistrationEventKind::AlreadyRegistered,
                 RegistrationEventKind::UnknownTool, RegistrationEventKind::ArityRejected}) {
    if (to_string(k) == text) return k;
  }
  throw ParseError(fmt::format("unknown registration outcome '{}'", text));
}

RegistrationState RegistrationState::lazy(const ToolCorpus& corpus, RegistrationContextMode mode,
                                          MultiRegistrationPolicy multi) {
  if (mode == RegistrationContextMode::Full) {
    throw ConfigError("lazy registration renders the roster as name_only or name_plus_description");
  }
  RegistrationState s;
  s.roster_ = corpus.names();
  s.mode_ = mode;
  s.multi_ = multi;
  s.meta_tool_enabled_ = true;
  return s;
}

RegistrationState RegistrationState::eager(const ToolCorpus& corpus) {
  RegistrationState s;
  s.roster_ = corpus.names();
  s.registered_ = s.roster_;
  s.registered_set_.insert(s.roster_.begin(), s.roster_.end());
  s.mode_ = RegistrationContextMode::Full;
  s.meta_tool_enabled_ = false;
  return s;
}

bool RegistrationState::is_registered(std::string_view name) const {
  return registered_set_.contains(std::string(name));
}

RegistrationOutcome RegistrationState::register_tools(std::span<const std::string> requested,
                                                      std::size_t step, const ToolCorpus& corpus) {
  RegistrationOutcome outcome;
  std::vector<std::string> already;
  bool any_unknown = false;
  std::string error;

  if (multi_ == MultiRegistrationPolicy::Single && requested.size() != 1) {
    error = requested.empty()
                ? "no function_name given; call tool_register with one function name"
                : "tool_register accepts exactly one function_name per call; register the tools "
                  "one at a time";
    for (const auto& name : requested) {
      outcome.rejected.emplace_back(name, "one tool per registration call");
      history_.push_back({step, name, RegistrationEventKind::ArityRejected});
    }
  } else if (requested.empty()) {
    error = "no function names given; call tool_register with at least one function name";
  } else {
    for (const auto& name : requested) {
      if (std::find(roster_.begin(), roster_.end(), name) == roster_.end()) {
        outcome.rejected.emplace_back(name, "unknown tool");
        history_.push_back({step, name, RegistrationEventKind::UnknownTool});
        any_unknown = true;
      } else if (registered_set_.contains(name)) {
        outcome.accepted.push_back(name);
        already.push_back(name);
        history_.push_back({step, name, RegistrationEventKind::AlreadyRegistered});
      } else {
        registered_.push_back(name);
        registered_set_.insert(name);
        outcome.accepted.push_back(name);
        history_.push_back({step, name, RegistrationEventKind::Registered});
      }
    }
    if (any_unknown) {
      error = "some requested functions do not exist; choose names from available_tools and do "
              "not call a function you have not successfully registered";
    }
  }

  Json observation;
  observation["error"] = error;
  Json registered = Json::array();
  for (const auto& name : outcome.accepted) registered.push_back(declaration_json(*corpus.find(name)));
  observation["registered"] = std::move(registered);
  if (!already.empty()) observation["already_registered"] = already;
  if (!outcome.rejected.empty()) {
    Json rejected = Json::array();
    for (const auto& [name, reason] : outcome.rejected) {
      rejected.push_back(Json{{"name", name}, {"reason", reason}});
    }
    observation["rejected"] = std::move(rejected);
  }
  if (any_unknown) observation["available_tools"] = roster_;
  outcome.observation_text = observation.dump();
  return outcome;
}

std::string RegistrationState::render_roster(const ToolCorpus& corpus) const {
  std::string out(kRosterHeader);
  out += '\n';
  out += serialize_subset(roster_, corpus, mode_);
  return out;
}

RegistrationState init_state(const ToolCorpus& corpus, RegistrationContextMode mode,
                             MultiRegistrationPolicy multi) {
  return RegistrationState::lazy(corpus, mode, multi);
}

const std::string& meta_tool_declaration(MultiRegistrationPolicy policy) {
  static const std::string single = build_meta_declaration(MultiRegistrationPolicy::Single);
  static const std::string multiple = build_meta_declaration(MultiRegistrationPolicy::Multiple);
  return policy == MultiRegistrationPolicy::Single ? single : multiple;
}

const std::string& finish_declaration() {
  static const std::string decl = build_finish_declaration();
  return decl;
}

std::vector<std::string> callable_tools(const RegistrationState& state, const ToolCorpus& corpus) {
  std::vector<std::string> out;
  out.reserve(state.registered().size() + 2);
  if (state.meta_tool_enabled()) out.push_back(meta_tool_declaration(state.multi()));
  out.push_back(finish_declaration());
  for (const auto& name : state.registered()) {
    const ToolSpec* tool = corpus.find(name);
    if (tool == nullptr) throw UnknownTool(name);
    out.push_back(serialize_declaration(*tool));
  }
  return out;
}

bool parse_register_arguments(const Json& arguments, std::vector<std::string>& names,
                              std::string& reason) {
  names.clear();
  if (!arguments.is_object()) {
    reason = "arguments must be a JSON object";
    return false;
  }
  const auto take = [&](const Json& value) {
    if (value.is_string()) {
      names.push_back(value.get<std::string>());
      return true;
    }
    if (value.is_array()) {
      for (const auto& v : value) {
        if (!v.is_string()) return false;
        names.push_back(v.get<std::string>());
      }
      return true;
    }
    return false;
  };
  const char* key = arguments.contains("function_names") ? "function_names" : "function_name";
  if (!arguments.contains(key)) {
    reason = "missing \"function_name\"";
    return false;
  }
  if (!take(arguments.at(key))) {
    names.clear();
    reason = fmt::format("\"{}\" must be a string or a list of strings", key);
    return false;
  }
  return true;
}

std::size_t registered_count_at(std::span<const RegistrationEvent> history, std::size_t step) {
  return static_cast<std::size_t>(std::count_if(history.begin(), history.end(), [&](const auto& e) {
    return e.step <= step && e.outcome == RegistrationEventKind::Registered;
  }));
}

Json to_json(const RegistrationEvent& event) {
  return Json{{"step", event.step}, {"tool", event.tool_name}, {"outcome", to_string(event.outcome)}};
}

RegistrationEvent registration_event_from_json(const Json& j) {
  return {j.at("step").get<std::size_t>(), j.at("tool").get<std::string>(),
          event_kind_from_string(j.at("outcome").get<std::string>())};
}

}  // namespace ecoact
