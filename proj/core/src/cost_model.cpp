// SPDX-License-Identifier: Apache-2.0
#include "ecoact/cost_model.hpp"

#include <fstream>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "ecoact/errors.hpp"

namespace ecoact {
namespace {

__extension__ using u128 = unsigned __int128;

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out{};
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("step cost overflows 64 bits");
  return out;
}

}  // namespace

std::string format_cents(MicroCents amount) {
  constexpr std::uint64_t kTenth = kMicroCentsPerCent / 10;
  // Half-up on the tenth-of-a-cent digit.
  const std::uint64_t tenths = amount.value / kTenth + (amount.value % kTenth >= kTenth / 2 ? 1 : 0);
  return fmt::format("{}.{}", tenths / 10, tenths % 10);
}

double to_cents(MicroCents amount) {
  return static_cast<double>(amount.value) / static_cast<double>(kMicroCentsPerCent);
}

std::string_view to_string(UsageSource source) {
  return source == UsageSource::Provider ? "provider" : "counter";
}

StepCost step_cost(TokenCount context_tokens, TokenCount tool_context_tokens,
                   TokenCount output_tokens, const PricingTable& pricing) {
  // Products are bounded by 2^64 before the 128-bit sum, so nothing wraps.
  const u128 input = u128(context_tokens) + tool_context_tokens;
  const u128 limit = std::numeric_limits<std::uint64_t>::max();
  const bool alpha_overflow = pricing.alpha != 0 && input > limit / pricing.alpha;
  const bool beta_overflow = pricing.beta != 0 && u128(output_tokens) > limit / pricing.beta;
  if (alpha_overflow || beta_overflow) throw std::overflow_error("step cost overflows 64 bits");
  const u128 total = input * pricing.alpha + u128(output_tokens) * pricing.beta;
  if (total > limit) throw std::overflow_error("step cost overflows 64 bits");
  const auto cost = static_cast<std::uint64_t>(total);
  StepCost out;
  out.context_tokens = context_tokens;
  out.tool_context_tokens = tool_context_tokens;
  out.output_tokens = output_tokens;
  out.cost = MicroCents{cost};
  return out;
}

void CostLedger::append(StepCost cost) {
  cost.step_index = steps.size() + 1;
  steps.push_back(cost);
}

TokenCount CostLedger::total_input_tokens() const {
  TokenCount total = 0;
  for (const auto& s : steps) total += s.input_tokens();
  return total;
}

TokenCount CostLedger::total_output_tokens() const {
  TokenCount total = 0;
  for (const auto& s : steps) total += s.output_tokens;
  return total;
}

MicroCents total_cost(const CostLedger& ledger) {
  MicroCents total;
  for (std::size_t i = 0; i < ledger.steps.size(); ++i) {
    const auto& step = ledger.steps[i];
    if (step.step_index != i + 1) {
      throw GapError(fmt::format("ledger step {} has index {}", i + 1, step.step_index));
    }
    total.value = checked_add(total.value, step.cost.value);
  }
  return total;
}

Json to_json(const StepCost& cost) {
  return Json{{"step_index", cost.step_index},
              {"context_tokens", cost.context_tokens},
              {"tool_context_tokens", cost.tool_context_tokens},
              {"output_tokens", cost.output_tokens},
              {"cost_microcents", cost.cost.value},
              {"usage_source", to_string(cost.source)}};
}

StepCost step_cost_from_json(const Json& j) {
  StepCost out;
  out.step_index = j.at("step_index").get<std::size_t>();
  out.context_tokens = j.at("context_tokens").get<TokenCount>();
  out.tool_context_tokens = j.at("tool_context_tokens").get<TokenCount>();
  out.output_tokens = j.at("output_tokens").get<TokenCount>();
  out.cost = MicroCents{j.at("cost_microcents").get<std::uint64_t>()};
  out.source = j.value("usage_source", std::string{"counter"}) == "provider" ? UsageSource::Provider
                                                                           : UsageSource::Counter;
  return out;
}

Json to_json(const CostLedger& ledger) {
  Json steps = Json::array();
  for (const auto& s : ledger.steps) steps.push_back(to_json(s));
  return Json{{"steps", std::move(steps)},
              {"total_cost_microcents", total_cost(ledger).value},
              {"total_cost_cents", format_cents(total_cost(ledger))},
              {"total_input_tokens", ledger.total_input_tokens()},
              {"total_output_tokens", ledger.total_output_tokens()}};
}

CostLedger ledger_from_json(const Json& j) {
  CostLedger ledger;
  for (const auto& s : j.at("steps")) ledger.steps.push_back(step_cost_from_json(s));
  return ledger;
}

PricingCatalog pricing_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("pricing file must be a JSON object of model ids");
  PricingCatalog catalog;
  for (const auto& [model, entry] : j.items()) {
    if (!entry.is_object() || !entry.contains("alpha") || !entry.contains("beta")) {
      throw ValidationError(model, "pricing entry '" + model + "' needs alpha and beta");
    }
    const auto& alpha = entry.at("alpha");
    const auto& beta = entry.at("beta");
    if (!alpha.is_number_unsigned() || !beta.is_number_unsigned()) {
      throw ValidationError(model,
                            "pricing entry '" + model + "': alpha/beta must be non-negative integers "
                            "(micro-cents per token)");
    }
    catalog.emplace(model, PricingTable{model, alpha.get<std::uint64_t>(), beta.get<std::uint64_t>()});
  }
  return catalog;
}

PricingCatalog load_pricing(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("pricing file not found: " + path.string());
  try {
    return pricing_from_json(Json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("pricing file " + path.string() + ": " + e.what());
  }
}

}  // namespace ecoact
