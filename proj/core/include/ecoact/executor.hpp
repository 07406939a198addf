// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "ecoact/common.hpp"

namespace ecoact {

/// Runs a registered tool and returns the observation text.
class Executor {
 public:
  virtual ~Executor() = default;
  virtual std::string execute(const std::string& tool, const Json& arguments) = 0;
};

/// Canned observations keyed by (tool, hash of canonical arguments).
///
/// Fixture file: {"<tool>": {"default": <json>, "cases": [{"arguments": {...},
/// "response": <json>}, ...]}, ...}. Unknown tools/arguments fall back to the
/// tool default, then to a generic echo. Observations are compact JSON of
/// {"error": "", "response": <json>}.
class MockExecutor final : public Executor {
 public:
  MockExecutor() = default;
  explicit MockExecutor(const Json& fixtures);

  std::string execute(const std::string& tool, const Json& arguments) override;

  static std::string key(const std::string& tool, const Json& arguments);

 private:
  std::map<std::string, Json, std::less<>> cases_;
  std::map<std::string, Json, std::less<>> defaults_;
};

MockExecutor load_mock_executor(const std::filesystem::path& path);

}  // namespace ecoact
