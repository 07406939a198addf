// SPDX-License-Identifier: Apache-2.0
#include "ecoact/backend.hpp"

#include <thread>

#include <fmt/format.h>

#include "ecoact/errors.hpp"
#include "ecoact/tool_corpus.hpp"

namespace ecoact {
namespace {

Json wire_message(const Message& m) {
  Json j;
  if (m.role == Role::Tool) {
    // Legacy function-calling shape: observations come back as role "function".
    if (m.name.empty()) {
      j["role"] = "user";
    } else {
      j["role"] = "function";
      j["name"] = m.name;
    }
    j["content"] = m.content;
    return j;
  }
  j["role"] = to_string(m.role);
  j["content"] = m.content;
  if (m.function_call) j["function_call"] = to_json(*m.function_call);
  return j;
}

Json parsed_declarations(const std::vector<std::string>& decls) {
  Json arr = Json::array();
  for (const auto& d : decls) arr.push_back(Json::parse(d));
  return arr;
}

}  // namespace

std::string serialize_request(const BackendRequest& request) {
  Json body;
  body["model"] = request.model_id;
  Json messages = Json::array();
  for (const auto& m : request.messages) messages.push_back(wire_message(m));
  body["messages"] = std::move(messages);
  if (!request.function_declarations.empty()) {
    body["functions"] = parsed_declarations(request.function_declarations);
  }
  body["temperature"] = request.temperature;
  if (request.seed) body["seed"] = *request.seed;
  return body.dump();
}

Json to_json(const BackendRequest& request) {
  Json messages = Json::array();
  for (const auto& m : request.messages) messages.push_back(to_json(m));
  Json j{{"model_id", request.model_id},
         {"messages", std::move(messages)},
         {"functions", parsed_declarations(request.function_declarations)},
         {"temperature", request.temperature}};
  if (request.seed) j["seed"] = *request.seed;
  return j;
}

BackendRequest request_from_json(const Json& j) {
  BackendRequest r;
  r.model_id = j.value("model_id", std::string{});
  for (const auto& m : j.at("messages")) r.messages.push_back(message_from_json(m));
  if (j.contains("functions")) {
    for (const auto& f : j.at("functions")) r.function_declarations.push_back(f.dump());
  }
  r.temperature = j.value("temperature", 0.0);
  if (j.contains("seed")) r.seed = j.at("seed").get<std::int64_t>();
  return r;
}

Json to_json(const BackendResponse& response) {
  Json j{{"content", response.assistant_content}};
  if (response.function_call) j["function_call"] = to_json(*response.function_call);
  if (response.usage) {
    j["usage"] = Json{{"prompt_tokens", response.usage->prompt_tokens},
                      {"completion_tokens", response.usage->completion_tokens}};
  }
  return j;
}

BackendResponse response_from_json(const Json& j) {
  BackendResponse r;
  if (j.contains("content") && j.at("content").is_string()) {
    r.assistant_content = j.at("content").get<std::string>();
  }
  if (j.contains("function_call") && !j.at("function_call").is_null()) {
    r.function_call = function_call_from_json(j.at("function_call"));
  }
  if (j.contains("usage") && !j.at("usage").is_null()) {
    const auto& u = j.at("usage");
    r.usage = Usage{u.at("prompt_tokens").get<TokenCount>(), u.at("completion_tokens").get<TokenCount>()};
  }
  return r;
}

TokenCount count_prompt_tokens(const BackendRequest& request, const TokenCounter& counter) {
  return counter.count(serialize_messages(request.messages)) +
         counter.count(join_declarations(request.function_declarations));
}

TokenCount count_completion_tokens(const BackendResponse& response, const TokenCounter& counter) {
  TokenCount n = counter.count(response.assistant_content);
  if (response.function_call) {
    n += counter.count(response.function_call->name) + counter.count(response.function_call->arguments);
  }
  return n;
}

MeasuredUsage measure_usage(const BackendRequest& request, const BackendResponse& response,
                            const TokenCounter& counter) {
  if (response.usage) {
    return {response.usage->prompt_tokens, response.usage->completion_tokens, UsageSource::Provider};
  }
  return {count_prompt_tokens(request, counter), count_completion_tokens(response, counter),
          UsageSource::Counter};
}

BackendResponse chat_with_retries(Backend& backend, const BackendRequest& request,
                                  const RetryPolicy& policy) {
  const int attempts = std::max(policy.retries, 1);
  std::string last_error;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    std::chrono::milliseconds wait = policy.backoff * (1LL << std::min(attempt, 16));
    try {
      return backend.chat(request);
    } catch (const RateLimited& e) {
      last_error = e.what();
      wait = std::max(wait, e.retry_after());
    } catch (const TransportError& e) {
      last_error = e.what();
    }
    if (attempt + 1 < attempts && wait.count() > 0) {
      if (policy.sleep) {
        policy.sleep(wait);
      } else {
        std::this_thread::sleep_for(wait);
      }
    }
  }
  throw BackendError(fmt::format("backend failed after {} attempts: {}", attempts, last_error));
}

}  // namespace ecoact
