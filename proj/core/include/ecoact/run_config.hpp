// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>

#include "ecoact/common.hpp"
#include "ecoact/cost_model.hpp"
#include "ecoact/registration.hpp"
#include "ecoact/tool_corpus.hpp"

namespace ecoact {

enum class Engine { React, Dfsdt };
enum class Variant { EcoAct, Eager };

std::string_view to_string(Engine engine);
std::string_view to_string(Variant variant);
Engine engine_from_string(std::string_view text);
Variant variant_from_string(std::string_view text);

struct RunConfig {
  Engine engine{Engine::React};
  Variant variant{Variant::EcoAct};
  RegistrationContextMode mode{RegistrationContextMode::NameOnly};
  MultiRegistrationPolicy multi{MultiRegistrationPolicy::Single};
  std::size_t max_steps{24};
  std::size_t max_total_steps{72};
  std::size_t dfsdt_max_children{0};  // 0 = unbounded
  int retries{3};
  std::int64_t backoff_ms{500};
  std::size_t malformed_limit{3};
  TokenCount obs_token_limit{1024};
  std::string model_id{"gpt-4o"};
  std::string pricing_ref;  // path of the pricing file the table came from
  PricingTable pricing{"gpt-4o", 250, 1000};
  std::int64_t seed{0};
  double temperature{0.0};
  bool log_wire{false};
  int judge_retries{2};
  std::string judge_model_id{"gpt-4-turbo"};
  std::size_t candidate_pool_size{64};
  std::size_t jobs{4};
};

/// Overlays the keys present in `j` onto `base`. Unknown keys are a
/// ConfigError so typos in sweep files surface immediately.
RunConfig apply_config_json(RunConfig base, const Json& j);
RunConfig load_run_config(const std::filesystem::path& path, RunConfig base = {});
Json to_json(const RunConfig& config);

/// When pricing_ref names a pricing file, replaces `pricing` with the entry
/// for model_id. Throws ConfigError if the model is not listed.
RunConfig resolve_pricing(RunConfig config);

}  // namespace ecoact
