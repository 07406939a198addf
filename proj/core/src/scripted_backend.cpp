// SPDX-License-Identifier: Apache-2.0
#include "ecoact/scripted_backend.hpp"

#include <algorithm>
#include <fstream>

#include <fmt/format.h>

#include "ecoact/errors.hpp"

namespace ecoact {
namespace {

std::vector<std::string> string_list(const Json& j) {
  if (j.is_string()) return {j.get<std::string>()};
  return j.get<std::vector<std::string>>();
}

RequestMatcher matcher_from_json(const Json& j) {
  RequestMatcher m;
  if (j.is_null()) return m;
  if (j.contains("turn")) m.turn = j.at("turn").get<std::size_t>();
  if (j.contains("contains")) m.contains = string_list(j.at("contains"));
  if (j.contains("excludes")) m.excludes = string_list(j.at("excludes"));
  if (j.contains("last_contains")) m.last_contains = j.at("last_contains").get<std::string>();
  if (j.contains("declares")) m.declares = j.at("declares").get<std::string>();
  return m;
}

Json to_json(const RequestMatcher& m) {
  Json j = Json::object();
  if (m.turn) j["turn"] = *m.turn;
  if (!m.contains.empty()) j["contains"] = m.contains;
  if (!m.excludes.empty()) j["excludes"] = m.excludes;
  if (m.last_contains) j["last_contains"] = *m.last_contains;
  if (m.declares) j["declares"] = *m.declares;
  return j;
}

}  // namespace

bool RequestMatcher::matches(const BackendRequest& request) const {
  if (turn) {
    const auto assistant_turns = static_cast<std::size_t>(
        std::count_if(request.messages.begin(), request.messages.end(),
                      [](const Message& m) { return m.role == Role::Assistant; }));
    if (assistant_turns != *turn) return false;
  }
  if (!contains.empty() || !excludes.empty()) {
    const std::string text = serialize_messages(request.messages);
    for (const auto& needle : contains) {
      if (text.find(needle) == std::string::npos) return false;
    }
    for (const auto& needle : excludes) {
      if (text.find(needle) != std::string::npos) return false;
    }
  }
  if (last_contains) {
    if (request.messages.empty()) return false;
    if (request.messages.back().content.find(*last_contains) == std::string::npos) return false;
  }
  if (declares) {
    const std::string needle = fmt::format("{{\"name\":{}", Json(*declares).dump());
    const bool found = std::any_of(
        request.function_declarations.begin(), request.function_declarations.end(),
        [&](const std::string& d) { return d.rfind(needle, 0) == 0; });
    if (!found) return false;
  }
  return true;
}

ScriptedPolicy script_from_json(const Json& j) {
  ScriptedPolicy policy;
  const std::string exhaustion = j.value("exhaustion", std::string{"error"});
  if (exhaustion == "repeat_last") {
    policy.exhaustion = Exhaustion::RepeatLast;
  } else if (exhaustion == "error") {
    policy.exhaustion = Exhaustion::Error;
  } else {
    throw ParseError(fmt::format("unknown script exhaustion '{}'", exhaustion));
  }
  if (j.contains("responses")) {
    for (const auto& r : j.at("responses")) {
      policy.rules.push_back(ScriptRule{{}, response_from_json(r), 1});
    }
  }
  if (j.contains("rules")) {
    for (const auto& r : j.at("rules")) {
      ScriptRule rule;
      rule.match = matcher_from_json(r.value("match", Json()));
      rule.response = response_from_json(r.at("response"));
      if (r.contains("times")) rule.times = r.at("times").get<std::size_t>();
      policy.rules.push_back(std::move(rule));
    }
  }
  return policy;
}

ScriptedPolicy load_script(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("script not found: " + path.string());
  try {
    return script_from_json(Json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(fmt::format("script {}: {}", path.string(), e.what()));
  }
}

Json to_json(const ScriptedPolicy& policy) {
  Json rules = Json::array();
  for (const auto& r : policy.rules) {
    Json rule{{"match", to_json(r.match)}, {"response", to_json(r.response)}};
    if (r.times) rule["times"] = *r.times;
    rules.push_back(std::move(rule));
  }
  return Json{{"exhaustion", policy.exhaustion == Exhaustion::RepeatLast ? "repeat_last" : "error"},
              {"rules", std::move(rules)}};
}

ScriptedPolicy replay_script(std::vector<BackendResponse> responses, Exhaustion exhaustion) {
  ScriptedPolicy policy;
  policy.exhaustion = exhaustion;
  for (auto& r : responses) {
    r.wire_request.clear();
    r.wire_response.clear();
    policy.rules.push_back(ScriptRule{{}, std::move(r), 1});
  }
  return policy;
}

ScriptedBackend::ScriptedBackend(ScriptedPolicy policy)
    : policy_(std::move(policy)), uses_(policy_.rules.size(), 0) {}

BackendResponse ScriptedBackend::chat(const BackendRequest& request) {
  std::lock_guard lock(mutex_);
  recorded_.push_back(request);
  for (std::size_t i = 0; i < policy_.rules.size(); ++i) {
    const auto& rule = policy_.rules[i];
    if (rule.times && uses_[i] >= *rule.times) continue;
    if (!rule.match.matches(request)) continue;
    ++uses_[i];
    last_ = rule.response;
    return rule.response;
  }
  if (policy_.exhaustion == Exhaustion::RepeatLast && last_) return *last_;
  throw ScriptExhausted(fmt::format("no script rule matches request #{}", recorded_.size()));
}

std::vector<BackendRequest> ScriptedBackend::recorded_requests() const {
  std::lock_guard lock(mutex_);
  return recorded_;
}

std::size_t ScriptedBackend::calls() const {
  std::lock_guard lock(mutex_);
  return recorded_.size();
}

}  // namespace ecoact
