// SPDX-License-Identifier: Apache-2.0
#include <filesystem>
#include <string>

#include <benchmark/benchmark.h>

#include "ecoact/executor.hpp"
#include "ecoact/reasoning.hpp"
#include "ecoact/scripted_backend.hpp"
#include "ecoact/tool_corpus.hpp"

namespace {

using namespace ecoact;

std::filesystem::path data(const std::string& rel) { return std::filesystem::path(ECOACT_DATA_DIR) / rel; }

void BM_TokenCount(benchmark::State& state) {
  const ToolCorpus corpus = load_corpus(data("corpora/sample50.json"));
  const std::string text = serialize_subset(corpus.names(), corpus, RegistrationContextMode::Full);
  for (auto _ : state) benchmark::DoNotOptimize(default_counter().count(text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_TokenCount);

void BM_CorpusTokenLength(benchmark::State& state) {
  const ToolCorpus corpus = load_corpus(data("corpora/sample50.json"));
  const auto mode = static_cast<RegistrationContextMode>(state.range(0));
  const auto names = corpus.names();
  for (auto _ : state) {
    benchmark::DoNotOptimize(corpus_token_length(names, corpus, mode, default_counter()));
  }
  state.SetLabel(std::string(to_string(mode)));
}
BENCHMARK(BM_CorpusTokenLength)
    ->Arg(static_cast<int>(RegistrationContextMode::Full))
    ->Arg(static_cast<int>(RegistrationContextMode::NameOnly))
    ->Arg(static_cast<int>(RegistrationContextMode::NamePlusDescription));

void BM_ScriptedReact(benchmark::State& state) {
  const ToolCorpus corpus = load_corpus(data("corpora/redundant30.json"));
  const bool eager = state.range(0) != 0;
  const ScriptedPolicy script = load_script(
      data(eager ? "scripts/q5_market_brief_eager.json" : "scripts/q5_market_brief_ecoact.json"));
  MockExecutor executor = load_mock_executor(data("observations/bundled.json"));
  RunConfig config;
  config.variant = eager ? Variant::Eager : Variant::EcoAct;
  const std::string query = "Give me a market brief";
  for (auto _ : state) {
    ScriptedBackend backend(script);
    benchmark::DoNotOptimize(run_react(query, corpus, backend, config, {&executor}));
  }
  state.SetLabel(eager ? "eager" : "ecoact");
}
BENCHMARK(BM_ScriptedReact)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
