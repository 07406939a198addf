// SPDX-License-Identifier: Apache-2.0
#include "ecoact/http_backend.hpp"

#include <cstdlib>
#include <regex>

#include <fmt/format.h>
#include <httplib.h>

#include "ecoact/errors.hpp"

namespace ecoact {

std::string api_key_from_env() {
  for (const char* name : {"ECOACT_API_KEY", "OPENAI_API_KEY"}) {
    if (const char* value = std::getenv(name); value != nullptr && *value != '\0') return value;
  }
  return {};
}

std::string redact(std::string text, const std::string& secret) {
  if (secret.empty()) return text;
  std::size_t pos = 0;
  while ((pos = text.find(secret, pos)) != std::string::npos) {
    text.replace(pos, secret.size(), "[REDACTED]");
    pos += 10;
  }
  return text;
}

BackendResponse parse_chat_completion(const std::string& body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(fmt::format("response is not JSON: {}", e.what()));
  }
  if (!j.is_object() || !j.contains("choices") || !j["choices"].is_array() || j["choices"].empty()) {
    throw SchemaError("response has no choices");
  }
  const auto& choice = j["choices"][0];
  if (!choice.contains("message") || !choice["message"].is_object()) {
    throw SchemaError("choice has no message");
  }
  const auto& msg = choice["message"];
  BackendResponse out;
  if (msg.contains("content") && msg["content"].is_string()) {
    out.assistant_content = msg["content"].get<std::string>();
  }
  const nlohmann::json* call = nullptr;
  if (msg.contains("function_call") && msg["function_call"].is_object()) {
    call = &msg["function_call"];
  } else if (msg.contains("tool_calls") && msg["tool_calls"].is_array() && !msg["tool_calls"].empty() &&
             msg["tool_calls"][0].contains("function")) {
    call = &msg["tool_calls"][0]["function"];
  }
  if (call != nullptr) {
    if (!call->contains("name") || !(*call)["name"].is_string()) {
      throw SchemaError("function_call without a name");
    }
    FunctionCall fc;
    fc.name = (*call)["name"].get<std::string>();
    if (call->contains("arguments")) {
      const auto& args = (*call)["arguments"];
      fc.arguments = args.is_string() ? args.get<std::string>() : args.dump();
    }
    out.function_call = std::move(fc);
  }
  if (j.contains("usage") && j["usage"].is_object()) {
    const auto& u = j["usage"];
    if (u.contains("prompt_tokens") && u.contains("completion_tokens") &&
        u["prompt_tokens"].is_number_unsigned() && u["completion_tokens"].is_number_unsigned()) {
      out.usage = Usage{u["prompt_tokens"].get<TokenCount>(), u["completion_tokens"].get<TokenCount>()};
    }
  }
  return out;
}

struct HttpBackend::Impl {
  HttpBackendConfig config;
  std::string origin;  // scheme://host[:port]
  std::string path;    // base path + /chat/completions
};

HttpBackend::HttpBackend(HttpBackendConfig config) : impl_(std::make_unique<Impl>()) {
  static const std::regex url(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(config.endpoint, m, url)) {
    throw ConfigError(fmt::format("endpoint '{}' is not an http(s) URL", config.endpoint));
  }
  impl_->origin = m[1].str();
  std::string base = m[2].matched ? m[2].str() : std::string{};
  while (!base.empty() && base.back() == '/') base.pop_back();
  impl_->path = base + "/chat/completions";
  impl_->config = std::move(config);
}

HttpBackend::~HttpBackend() = default;

BackendResponse HttpBackend::chat(const BackendRequest& request) {
  const auto& cfg = impl_->config;
  // One client per call keeps chat() safe to use from several traces at once.
  httplib::Client client(impl_->origin);
  client.set_connection_timeout(cfg.timeout);
  client.set_read_timeout(cfg.timeout);
  client.set_write_timeout(cfg.timeout);

  httplib::Headers headers;
  if (!cfg.api_key.empty()) headers.emplace("Authorization", "Bearer " + cfg.api_key);

  const std::string body = serialize_request(request);
  auto result = client.Post(impl_->path, headers, body, "application/json");
  if (!result) {
    throw TransportError(fmt::format("POST {}{} failed: {}", impl_->origin, impl_->path,
                                     httplib::to_string(result.error())));
  }
  const int status = result->status;
  if (status == 401 || status == 403) {
    throw AuthError(fmt::format("endpoint rejected credentials (HTTP {})", status));
  }
  if (status == 429) {
    std::chrono::milliseconds retry_after{0};
    if (result->has_header("Retry-After")) {
      try {
        retry_after = std::chrono::seconds(std::stol(result->get_header_value("Retry-After")));
      } catch (const std::exception&) {
      }
    }
    throw RateLimited("rate limited (HTTP 429)", retry_after);
  }
  if (status < 200 || status >= 300) {
    throw TransportError(fmt::format("HTTP {} from {}", status, impl_->origin));
  }
  BackendResponse out = parse_chat_completion(result->body);
  if (cfg.log_wire) {
    out.wire_request = redact(body, cfg.api_key);
    out.wire_response = redact(result->body, cfg.api_key);
  }
  return out;
}

}  // namespace ecoact
