// SPDX-License-Identifier: Apache-2.0
#include "ecoact/executor.hpp"

#include <fstream>

#include <fmt/format.h>

#include "ecoact/errors.hpp"

namespace ecoact {

MockExecutor::MockExecutor(const Json& fixtures) {
  if (!fixtures.is_object()) throw ParseError("observation fixtures must be a JSON object");
  for (const auto& [tool, entry] : fixtures.items()) {
    if (entry.contains("default")) defaults_.emplace(tool, entry.at("default"));
    if (entry.contains("cases")) {
      for (const auto& c : entry.at("cases")) {
        cases_.emplace(key(tool, c.value("arguments", Json::object())), c.at("response"));
      }
    }
  }
}

std::string MockExecutor::key(const std::string& tool, const Json& arguments) {
  return tool + "#" + fnv1a64_hex(canonical_dump(arguments));
}

std::string MockExecutor::execute(const std::string& tool, const Json& arguments) {
  Json response;
  if (auto it = cases_.find(key(tool, arguments)); it != cases_.end()) {
    response = it->second;
  } else if (auto d = defaults_.find(tool); d != defaults_.end()) {
    response = d->second;
  } else {
    response = Json{{"tool", tool}, {"arguments", arguments}, {"status", "ok"}};
  }
  return Json{{"error", ""}, {"response", std::move(response)}}.dump();
}

MockExecutor load_mock_executor(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("observation fixtures not found: " + path.string());
  try {
    return MockExecutor(Json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(fmt::format("observation fixtures {}: {}", path.string(), e.what()));
  }
}

}  // namespace ecoact
