// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <memory>
#include <string>

#include "ecoact/backend.hpp"

namespace ecoact {

struct HttpBackendConfig {
  /// Base URL, e.g. "https://api.openai.com/v1" or "http://127.0.0.1:8080/v1".
  /// Requests go to <endpoint>/chat/completions.
  std::string endpoint;
  std::string api_key;
  std::chrono::seconds timeout{120};
  bool log_wire{false};
};

/// Reads the key from $ECOACT_API_KEY, falling back to $OPENAI_API_KEY.
std::string api_key_from_env();

/// Client for OpenAI-compatible chat-completions endpoints. One HTTP call
/// per chat(); retries are the caller's business (see chat_with_retries).
///
/// Errors: AuthError (401/403), RateLimited (429), TransportError (network
/// failure or other non-2xx), SchemaError (body is not a chat completion).
class HttpBackend final : public Backend {
 public:
  explicit HttpBackend(HttpBackendConfig config);
  ~HttpBackend() override;

  BackendResponse chat(const BackendRequest& request) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Maps a chat-completions response body to a BackendResponse.
/// Throws SchemaError when the body has no usable choice.
BackendResponse parse_chat_completion(const std::string& body);

/// Replaces every occurrence of `secret` in `text` with "[REDACTED]".
std::string redact(std::string text, const std::string& secret);

}  // namespace ecoact
