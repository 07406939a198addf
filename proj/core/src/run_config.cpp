// SPDX-License-Identifier: Apache-2.0
#include "ecoact/run_config.hpp"

#include <fstream>

#include <fmt/format.h>

#include "ecoact/errors.hpp"
#include "ecoact/cost_model.hpp"

namespace ecoact {

std::string_view to_string(Engine engine) { return engine == Engine::React ? "react" : "dfsdt"; }
std::string_view to_string(Variant variant) { return variant == Variant::EcoAct ? "ecoact" : "eager"; }

Engine engine_from_string(std::string_view text) {
  if (text == "react") return Engine::React;
  if (text == "dfsdt") return Engine::Dfsdt;
  throw ConfigError(fmt::format("unknown engine '{}' (expected react|dfsdt)", text));
}

Variant variant_from_string(std::string_view text) {
  if (text == "ecoact") return Variant::EcoAct;
  if (text == "eager") return Variant::Eager;
  throw ConfigError(fmt::format("unknown variant '{}' (expected ecoact|eager)", text));
}

RunConfig apply_config_json(RunConfig c, const Json& j) {
  if (!j.is_object()) throw ConfigError("run config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "engine") c.engine = engine_from_string(v.get<std::string>());
      else if (key == "variant") c.variant = variant_from_string(v.get<std::string>());
      else if (key == "mode") c.mode = mode_from_string(v.get<std::string>());
      else if (key == "multi") c.multi = multi_from_string(v.get<std::string>());
      else if (key == "max_steps") c.max_steps = v.get<std::size_t>();
      else if (key == "max_total_steps") c.max_total_steps = v.get<std::size_t>();
      else if (key == "dfsdt_max_children") c.dfsdt_max_children = v.get<std::size_t>();
      else if (key == "retries") c.retries = v.get<int>();
      else if (key == "backoff_ms") c.backoff_ms = v.get<std::int64_t>();
      else if (key == "malformed_limit") c.malformed_limit = v.get<std::size_t>();
      else if (key == "obs_token_limit") c.obs_token_limit = v.get<TokenCount>();
      else if (key == "model_id") c.model_id = v.get<std::string>();
      else if (key == "pricing_ref") c.pricing_ref = v.get<std::string>();
      else if (key == "pricing") {
        c.pricing.model_id = v.value("model_id", c.model_id);
        c.pricing.alpha = v.at("alpha").get<std::uint64_t>();
        c.pricing.beta = v.at("beta").get<std::uint64_t>();
      }
      else if (key == "seed") c.seed = v.get<std::int64_t>();
      else if (key == "temperature") c.temperature = v.get<double>();
      else if (key == "log_wire") c.log_wire = v.get<bool>();
      else if (key == "judge_retries") c.judge_retries = v.get<int>();
      else if (key == "judge_model_id") c.judge_model_id = v.get<std::string>();
      else if (key == "candidate_pool_size") c.candidate_pool_size = v.get<std::size_t>();
      else if (key == "jobs") c.jobs = v.get<std::size_t>();
      else throw ConfigError(fmt::format("unknown run config key '{}'", key));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("run config: {}", e.what()));
  }
  if (c.max_steps < 1) throw ConfigError("max_steps must be >= 1");
  if (c.max_total_steps < 1) throw ConfigError("max_total_steps must be >= 1");
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config not found: " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(fmt::format("config {}: {}", path.string(), e.what()));
  }
  RunConfig c = apply_config_json(std::move(base), j);
  if (!c.pricing_ref.empty()) {
    std::filesystem::path ref = c.pricing_ref;
    if (ref.is_relative()) ref = path.parent_path() / ref;
    c.pricing_ref = ref.lexically_normal().string();
  }
  return c;
}

Json to_json(const RunConfig& c) {
  return Json{{"engine", to_string(c.engine)},
              {"variant", to_string(c.variant)},
              {"mode", to_string(c.mode)},
              {"multi", to_string(c.multi)},
              {"max_steps", c.max_steps},
              {"max_total_steps", c.max_total_steps},
              {"dfsdt_max_children", c.dfsdt_max_children},
              {"retries", c.retries},
              {"backoff_ms", c.backoff_ms},
              {"malformed_limit", c.malformed_limit},
              {"obs_token_limit", c.obs_token_limit},
              {"model_id", c.model_id},
              {"pricing_ref", c.pricing_ref},
              {"pricing", Json{{"model_id", c.pricing.model_id},
                               {"alpha", c.pricing.alpha},
                               {"beta", c.pricing.beta}}},
              {"seed", c.seed},
              {"temperature", c.temperature},
              {"log_wire", c.log_wire},
              {"judge_retries", c.judge_retries},
              {"judge_model_id", c.judge_model_id},
              {"candidate_pool_size", c.candidate_pool_size},
              {"jobs", c.jobs}};
}

RunConfig resolve_pricing(RunConfig config) {
  if (config.pricing_ref.empty()) return config;
  const PricingCatalog catalog = load_pricing(config.pricing_ref);
  const auto it = catalog.find(config.model_id);
  if (it == catalog.end()) {
    throw ConfigError(fmt::format("model '{}' has no entry in {}", config.model_id, config.pricing_ref));
  }
  config.pricing = it->second;
  return config;
}

}  // namespace ecoact
