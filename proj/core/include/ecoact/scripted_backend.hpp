// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ecoact/backend.hpp"

namespace ecoact {

/// Predicate over a request. All present fields must hold.
struct RequestMatcher {
  std::optional<std::size_t> turn;         // number of assistant messages in the request
  std::vector<std::string> contains;       // substrings of the serialized messages
  std::vector<std::string> excludes;       // must not appear in the serialized messages
  std::optional<std::string> last_contains;  // substring of the last message's content
  std::optional<std::string> declares;     // a declared function with this name

  bool matches(const BackendRequest& request) const;
};

struct ScriptRule {
  RequestMatcher match;
  BackendResponse response;
  std::optional<std::size_t> times;  // max uses; unlimited when absent
};

enum class Exhaustion { RepeatLast, Error };

/// Ordered rules; the first matching rule that still has uses left wins.
/// An order-global script is a list of `times: 1` rules with empty matchers.
struct ScriptedPolicy {
  std::vector<ScriptRule> rules;
  Exhaustion exhaustion{Exhaustion::Error};
};

ScriptedPolicy script_from_json(const Json& j);
ScriptedPolicy load_script(const std::filesystem::path& path);
Json to_json(const ScriptedPolicy& policy);

/// Order-global script replaying `responses` one per call.
ScriptedPolicy replay_script(std::vector<BackendResponse> responses, Exhaustion exhaustion);

class ScriptedBackend final : public Backend {
 public:
  explicit ScriptedBackend(ScriptedPolicy policy);

  BackendResponse chat(const BackendRequest& request) override;

  std::vector<BackendRequest> recorded_requests() const;
  std::size_t calls() const;

 private:
  mutable std::mutex mutex_;
  ScriptedPolicy policy_;
  std::vector<std::size_t> uses_;
  std::vector<BackendRequest> recorded_;
  std::optional<BackendResponse> last_;
};

}  // namespace ecoact
