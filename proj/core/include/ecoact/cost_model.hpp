// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ecoact/common.hpp"

namespace ecoact {

/// Currency in integer micro-cents (1 US cent = 1'000'000).
struct MicroCents {
  std::uint64_t value{};

  friend constexpr MicroCents operator+(MicroCents a, MicroCents b) { return {a.value + b.value}; }
  constexpr MicroCents& operator+=(MicroCents o) {
    value += o.value;
    return *this;
  }
  friend constexpr auto operator<=>(const MicroCents&, const MicroCents&) = default;
};

inline constexpr std::uint64_t kMicroCentsPerCent = 1'000'000;

/// Cents with one decimal, rounded half-up ("4.8"). Rounding happens here and
/// nowhere else.
std::string format_cents(MicroCents amount);

/// Cents as a double for display/plotting only.
double to_cents(MicroCents amount);

struct PricingTable {
  std::string model_id;
  std::uint64_t alpha{};  // micro-cents per input token
  std::uint64_t beta{};   // micro-cents per output token
};

enum class UsageSource { Counter, Provider };
std::string_view to_string(UsageSource source);

struct StepCost {
  std::size_t step_index{};
  TokenCount context_tokens{};
  TokenCount tool_context_tokens{};
  TokenCount output_tokens{};
  MicroCents cost{};
  UsageSource source{UsageSource::Counter};

  TokenCount input_tokens() const { return context_tokens + tool_context_tokens; }
};

/// alpha * (context + tool_context) + beta * output, in exact integer
/// arithmetic. Throws std::overflow_error if the result does not fit 64 bits.
StepCost step_cost(TokenCount context_tokens, TokenCount tool_context_tokens,
                   TokenCount output_tokens, const PricingTable& pricing);

struct CostLedger {
  std::vector<StepCost> steps;

  /// Appends `cost` renumbered as the next contiguous step.
  void append(StepCost cost);
  bool empty() const { return steps.empty(); }
  std::size_t size() const { return steps.size(); }
  TokenCount total_input_tokens() const;
  TokenCount total_output_tokens() const;
};

/// Sum of step costs. Throws GapError unless step indices run 1, 2, ..., n.
MicroCents total_cost(const CostLedger& ledger);

Json to_json(const StepCost& cost);
StepCost step_cost_from_json(const Json& j);
Json to_json(const CostLedger& ledger);
CostLedger ledger_from_json(const Json& j);

/// model_id -> pricing. File shape: {"<model_id>": {"alpha": n, "beta": n}, ...}
using PricingCatalog = std::map<std::string, PricingTable, std::less<>>;
PricingCatalog load_pricing(const std::filesystem::path& path);
PricingCatalog pricing_from_json(const Json& j);

}  // namespace ecoact
