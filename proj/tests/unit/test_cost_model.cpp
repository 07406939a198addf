// SPDX-License-Identifier: Apache-2.0
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include <boost/multiprecision/cpp_int.hpp>
#include <gtest/gtest.h>

#include "ecoact/cost_model.hpp"
#include "ecoact/errors.hpp"
#include "test_support.hpp"

namespace ecoact {
namespace {

using boost::multiprecision::cpp_int;

TEST(StepCost, ZeroTokensCostNothing) {
  EXPECT_EQ(step_cost(0, 0, 0, {"m", 250, 1000}).cost.value, 0u);
}

TEST(StepCost, HandExample) {
  const StepCost c = step_cost(100, 50, 10, {"m", 1, 3});
  EXPECT_EQ(c.cost.value, 180u);
  EXPECT_EQ(c.input_tokens(), 150u);
  EXPECT_EQ(c.output_tokens, 10u);
}

TEST(StepCost, OverflowIsReported) {
  const auto big = std::numeric_limits<TokenCount>::max() / 2;
  EXPECT_THROW(step_cost(big, big, 0, {"m", 3, 1}), std::overflow_error);
  EXPECT_THROW(step_cost(0, 0, big, {"m", 0, 3}), std::overflow_error);
}

TEST(StepCost, MatchesBigIntegerEvaluation) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 5000; ++i) {
    // Mix of realistic and near-limit magnitudes.
    const int shift = static_cast<int>(rng() % 40);
    const TokenCount ctx = rng() >> shift, tool = rng() >> shift, out = rng() >> shift;
    const std::uint64_t alpha = rng() % 5000, beta = rng() % 15000;
    const cpp_int expected = cpp_int(alpha) * (cpp_int(ctx) + cpp_int(tool)) + cpp_int(beta) * cpp_int(out);
    if (expected > cpp_int(std::numeric_limits<std::uint64_t>::max())) {
      EXPECT_THROW(step_cost(ctx, tool, out, {"m", alpha, beta}), std::overflow_error);
    } else {
      EXPECT_EQ(cpp_int(step_cost(ctx, tool, out, {"m", alpha, beta}).cost.value), expected);
    }
  }
}

TEST(StepCost, ScalingPricesScalesCost) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    const TokenCount a = rng() % 100000, b = rng() % 100000, o = rng() % 10000;
    const std::uint64_t alpha = rng() % 2000, beta = rng() % 6000, k = 1 + rng() % 50;
    const auto base = step_cost(a, b, o, {"m", alpha, beta}).cost.value;
    EXPECT_EQ(step_cost(a, b, o, {"m", alpha * k, beta * k}).cost.value, base * k);
  }
}

TEST(StepCost, MoreToolContextCostsMore) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 1000; ++i) {
    const TokenCount a = rng() % 100000, b = rng() % 100000, o = rng() % 1000;
    const std::uint64_t alpha = 1 + rng() % 2000;
    EXPECT_GT(step_cost(a, b + 1, o, {"m", alpha, 7}).cost, step_cost(a, b, o, {"m", alpha, 7}).cost);
  }
}

TEST(CostLedger, AppendRenumbersContiguously) {
  CostLedger ledger;
  StepCost c = step_cost(1, 1, 1, {"m", 1, 1});
  c.step_index = 42;
  ledger.append(c);
  ledger.append(c);
  EXPECT_EQ(ledger.steps[0].step_index, 1u);
  EXPECT_EQ(ledger.steps[1].step_index, 2u);
}

TEST(TotalCost, EmptyLedgerIsZero) { EXPECT_EQ(total_cost(CostLedger{}).value, 0u); }

TEST(TotalCost, HandExample) {
  CostLedger ledger;
  ledger.append(step_cost(100, 50, 10, {"m", 1, 3}));
  ledger.append(step_cost(20, 0, 0, {"m", 1, 3}));
  EXPECT_EQ(total_cost(ledger).value, 200u);
  EXPECT_EQ(total_cost(ledger).value, 200u);  // idempotent
}

TEST(TotalCost, GapIsRejected) {
  CostLedger ledger;
  ledger.append(step_cost(1, 0, 0, {"m", 1, 1}));
  ledger.append(step_cost(1, 0, 0, {"m", 1, 1}));
  ledger.steps[1].step_index = 3;
  EXPECT_THROW(total_cost(ledger), GapError);
}

TEST(TotalCost, ThousandRandomStepsMatchIndependentSum) {
  std::mt19937_64 rng(77);
  CostLedger ledger;
  cpp_int expected = 0;
  for (int i = 0; i < 1000; ++i) {
    const TokenCount a = rng() % 50000, b = rng() % 50000, o = rng() % 2000;
    ledger.append(step_cost(a, b, o, {"m", 250, 1000}));
    expected += cpp_int(250) * (a + b) + cpp_int(1000) * o;
  }
  EXPECT_EQ(cpp_int(total_cost(ledger).value), expected);
}

TEST(FormatCents, RoundsHalfUpToTenths) {
  EXPECT_EQ(format_cents(MicroCents{0}), "0.0");
  EXPECT_EQ(format_cents(MicroCents{4'750'000}), "4.8");
  EXPECT_EQ(format_cents(MicroCents{4'749'999}), "4.7");
  EXPECT_EQ(format_cents(MicroCents{7'400'000}), "7.4");
  EXPECT_EQ(format_cents(MicroCents{123'456'789'000}), "123456.8");
}

TEST(CostLedger, JsonRoundTrip) {
  CostLedger ledger;
  ledger.append(step_cost(10, 20, 30, {"m", 2, 3}));
  StepCost provider = step_cost(1, 2, 3, {"m", 2, 3});
  provider.source = UsageSource::Provider;
  ledger.append(provider);
  const CostLedger back = ledger_from_json(to_json(ledger));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back.steps[1].source, UsageSource::Provider);
  EXPECT_EQ(total_cost(back), total_cost(ledger));
}

TEST(Pricing, LoadsCatalog) {
  const auto path = std::filesystem::temp_directory_path() / "ecoact_pricing_test.json";
  std::ofstream(path) << R"({"gpt-4o":{"alpha":250,"beta":1000}})";
  const PricingCatalog catalog = load_pricing(path);
  ASSERT_EQ(catalog.count("gpt-4o"), 1u);
  EXPECT_EQ(catalog.at("gpt-4o").alpha, 250u);
  EXPECT_EQ(catalog.at("gpt-4o").beta, 1000u);
}

}  // namespace
}  // namespace ecoact
