// SPDX-License-Identifier: Apache-2.0
#include "ecoact/messages.hpp"

#include <fmt/format.h>

#include "ecoact/errors.hpp"

namespace ecoact {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::System:
      return "system";
    case Role::User:
      return "user";
    case Role::Assistant:
      return "assistant";
    case Role::Tool:
      return "tool";
  }
  return "user";
}

Role role_from_string(std::string_view text) {
  if (text == "system") return Role::System;
  if (text == "user") return Role::User;
  if (text == "assistant") return Role::Assistant;
  if (text == "tool" || text == "function") return Role::Tool;
  throw ParseError(fmt::format("unknown message role '{}'", text));
}

Json to_json(const FunctionCall& call) {
  return Json{{"name", call.name}, {"arguments", call.arguments}};
}

FunctionCall function_call_from_json(const Json& j) {
  FunctionCall call;
  call.name = j.at("name").get<std::string>();
  const auto& args = j.contains("arguments") ? j.at("arguments") : Json("");
  call.arguments = args.is_string() ? args.get<std::string>() : args.dump();
  return call;
}

Json to_json(const Message& message) {
  Json j{{"role", to_string(message.role)}, {"content", message.content}};
  if (message.function_call) j["function_call"] = to_json(*message.function_call);
  if (!message.name.empty()) j["name"] = message.name;
  return j;
}

Message message_from_json(const Json& j) {
  Message m;
  m.role = role_from_string(j.at("role").get<std::string>());
  if (j.contains("content") && j.at("content").is_string()) m.content = j.at("content").get<std::string>();
  if (j.contains("function_call") && !j.at("function_call").is_null()) {
    m.function_call = function_call_from_json(j.at("function_call"));
  }
  if (j.contains("name")) m.name = j.at("name").get<std::string>();
  return m;
}

std::string serialize_messages(std::span<const Message> messages) {
  if (messages.empty()) return {};
  Json arr = Json::array();
  for (const auto& m : messages) arr.push_back(to_json(m));
  return arr.dump();
}

}  // namespace ecoact
