// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ecoact/common.hpp"

namespace ecoact {

enum class Role { System, User, Assistant, Tool };
std::string_view to_string(Role role);
Role role_from_string(std::string_view text);

struct FunctionCall {
  std::string name;
  std::string arguments;  // JSON text exactly as produced by the model

  friend bool operator==(const FunctionCall&, const FunctionCall&) = default;
};

struct Message {
  Role role{Role::User};
  std::string content;
  std::optional<FunctionCall> function_call;  // assistant messages only
  std::string name;                           // tool messages: the function that ran

  friend bool operator==(const Message&, const Message&) = default;
};

/// {"role","content"[,"function_call"][,"name"]}
Json to_json(const Message& message);
Message message_from_json(const Json& j);
Json to_json(const FunctionCall& call);
FunctionCall function_call_from_json(const Json& j);

/// Compact JSON array of messages; "" for an empty list.
std::string serialize_messages(std::span<const Message> messages);

}  // namespace ecoact
