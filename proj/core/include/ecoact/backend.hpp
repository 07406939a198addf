// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ecoact/common.hpp"
#include "ecoact/cost_model.hpp"
#include "ecoact/messages.hpp"
#include "ecoact/token_counter.hpp"

namespace ecoact {

struct BackendRequest {
  std::string model_id;
  std::vector<Message> messages;
  std::vector<std::string> function_declarations;  // serialized, as from callable_tools
  double temperature{0.0};
  std::optional<std::int64_t> seed;
};

struct Usage {
  TokenCount prompt_tokens{};
  TokenCount completion_tokens{};
  friend bool operator==(const Usage&, const Usage&) = default;
};

struct BackendResponse {
  std::string assistant_content;
  std::optional<FunctionCall> function_call;
  std::optional<Usage> usage;  // provider-reported, when available
  // Raw bodies, filled only when wire logging is on.
  std::string wire_request;
  std::string wire_response;
};

/// Chat-with-function-calling. Implementations must tolerate concurrent
/// calls from different traces.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual BackendResponse chat(const BackendRequest& request) = 0;
};

/// OpenAI chat-completions body with the legacy `functions` field.
/// Declarations are spliced in byte-for-byte.
std::string serialize_request(const BackendRequest& request);
Json to_json(const BackendRequest& request);
BackendRequest request_from_json(const Json& j);
Json to_json(const BackendResponse& response);
BackendResponse response_from_json(const Json& j);

struct MeasuredUsage {
  TokenCount prompt_tokens{};
  TokenCount completion_tokens{};
  UsageSource source{UsageSource::Counter};
};

/// Provider usage when present; otherwise counts the serialized messages +
/// declarations (prompt) and the reply's content + function name + arguments
/// (completion).
MeasuredUsage measure_usage(const BackendRequest& request, const BackendResponse& response,
                            const TokenCounter& counter);

/// Prompt tokens of a request under `counter` (messages + declarations).
TokenCount count_prompt_tokens(const BackendRequest& request, const TokenCounter& counter);
TokenCount count_completion_tokens(const BackendResponse& response, const TokenCounter& counter);

struct RetryPolicy {
  int retries{3};  // total attempts before giving up (at least 1)
  std::chrono::milliseconds backoff{500};      // doubled per attempt
  std::function<void(std::chrono::milliseconds)> sleep;  // defaults to sleep_for
};

/// Calls backend.chat, retrying TransportError and RateLimited with
/// exponential backoff. AuthError, SchemaError and ScriptExhausted propagate
/// immediately. After `retries` consecutive failures throws BackendError.
BackendResponse chat_with_retries(Backend& backend, const BackendRequest& request,
                                  const RetryPolicy& policy);

}  // namespace ecoact
