// SPDX-License-Identifier: Apache-2.0
// Acceptance checks. Prints one PASS/FAIL line per criterion; exit status is
// non-zero when any selected criterion fails.
//
//   ecoact_acceptance            all criteria
//   ecoact_acceptance 3 5        only criteria 3 and 5

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <fmt/format.h>

#include "ecoact/cost_model.hpp"
#include "ecoact/evaluation.hpp"
#include "ecoact/harness.hpp"
#include "ecoact/reasoning.hpp"
#include "ecoact/registration.hpp"
#include "ecoact/tool_corpus.hpp"

namespace fs = std::filesystem;
using boost::multiprecision::cpp_int;
using namespace ecoact;

namespace {

fs::path data(const std::string& rel) { return fs::path(ECOACT_DATA_DIR) / rel; }

struct Outcome {
  bool pass{false};
  std::string detail;
};

RunConfig base_config() {
  RunConfig c;
  c.backoff_ms = 0;
  c.jobs = 4;
  return c;
}

// Every scripted run shipped with the repository: (label, request).
std::vector<std::pair<std::string, RunRequest>> bundled_runs() {
  std::vector<std::pair<std::string, RunRequest>> out;
  for (const char* variant : {"ecoact", "eager"}) {
    RunRequest r;
    r.query_id = "demo";
    r.query = "What's the weather in Lisbon right now?";
    r.corpus_path = data("corpora/demo.json");
    r.script = data(fmt::format("scripts/demo_{}.json", variant));
    r.observations = data("observations/bundled.json");
    r.config = base_config();
    r.config.variant = variant_from_string(variant);
    r.timestamps = false;
    out.emplace_back(r.script.stem().string(), r);
  }
  for (const char* suite_file : {"suites/hermetic6.json", "suites/restarts.json"}) {
    const Suite suite = load_suite(data(suite_file));
    for (const auto& e : suite.entries) {
      for (const auto& [key, script] : e.scripts) {
        RunRequest r;
        r.query_id = e.query_id;
        r.query = e.query;
        r.corpus_path = e.corpus;
        r.candidates = e.candidates;
        r.script = script;
        r.observations = e.observations;
        r.config = base_config();
        r.config.variant = key.rfind("eager", 0) == 0 ? Variant::Eager : Variant::EcoAct;
        if (key.ends_with("_multiple")) r.config.multi = MultiRegistrationPolicy::Multiple;
        r.timestamps = false;
        out.emplace_back(script.stem().string(), r);
      }
    }
  }
  return out;
}

RunRequest bundled_request(const std::string& label) {
  for (auto& [name, r] : bundled_runs()) {
    if (name == label) return r;
  }
  throw std::runtime_error("no bundled script " + label);
}

// 1. Cost-model exactness against arbitrary-precision arithmetic.
Outcome cost_exactness() {
  std::mt19937_64 rng(20240601);
  const cpp_int limit = cpp_int(std::numeric_limits<std::uint64_t>::max());
  std::size_t overflows = 0;
  for (int i = 0; i < 10'000; ++i) {
    const int shift = static_cast<int>(rng() % 48);
    const PricingTable pricing{"m", rng() % 20'000, rng() % 60'000};
    const std::size_t n = 1 + rng() % 12;
    CostLedger ledger;
    cpp_int expected_total = 0;
    bool step_overflow = false;
    for (std::size_t s = 0; s < n; ++s) {
      const TokenCount ctx = rng() >> (shift + 16), tool = rng() >> (shift + 16), out = rng() >> (shift + 16);
      const cpp_int expected = cpp_int(pricing.alpha) * (cpp_int(ctx) + tool) + cpp_int(pricing.beta) * out;
      if (expected > limit) {
        try {
          step_cost(ctx, tool, out, pricing);
          return {false, fmt::format("tuple {} step {}: overflow not reported", i, s)};
        } catch (const std::overflow_error&) {
          ++overflows;
          step_overflow = true;
          break;
        }
      }
      const StepCost c = step_cost(ctx, tool, out, pricing);
      if (cpp_int(c.cost.value) != expected) {
        return {false, fmt::format("tuple {} step {}: {} != {}", i, s, c.cost.value, expected.str())};
      }
      ledger.append(c);
      expected_total += expected;
    }
    if (step_overflow) continue;
    if (expected_total > limit) {
      try {
        total_cost(ledger);
        return {false, fmt::format("tuple {}: total overflow not reported", i)};
      } catch (const std::overflow_error&) {
        ++overflows;
      }
      continue;
    }
    if (cpp_int(total_cost(ledger).value) != expected_total) {
      return {false, fmt::format("tuple {}: total mismatch", i)};
    }
  }
  return {true, fmt::format("10000 tuples exact, {} overflows reported", overflows)};
}

// 2. Level-3 input-token savings on the redundant 30-tool corpus.
Outcome level3_savings() {
  const RunResult eco = run_single(bundled_request("q5_market_brief_ecoact"));
  const RunResult eager = run_single(bundled_request("q5_market_brief_eager"));
  const SavingsRow s = compare_traces(eco.trace, eager.trace);
  const auto savings = s.input_token_savings();
  if (!savings) return {false, "eager run has no input tokens"};
  const bool ok = eco.trace.roster_size == 30 && eco.trace.registered.size() == 3 &&
                  eco.trace.final == FinalKind::Answer && eager.trace.final == FinalKind::Answer &&
                  savings->numerator * 2 >= static_cast<std::int64_t>(savings->denominator);
  return {ok, fmt::format("roster {}, registered {}, input tokens ecoact {} vs eager {}, savings {}%",
                          eco.trace.roster_size, eco.trace.registered.size(), s.ecoact_input_tokens,
                          s.eager_input_tokens, savings->percent_string())};
}

bool is_registration(const Step& step) { return std::holds_alternative<RegisterTool>(step.action); }

// 3. Two-tool corpus: cost difference versus the registration steps.
Outcome small_corpus_regression() {
  const RunResult eco = run_single(bundled_request("q1_order_eta_ecoact"));
  const RunResult eager = run_single(bundled_request("q1_order_eta_eager"));
  const auto signed_total = [](const CostLedger& l) {
    return static_cast<std::int64_t>(total_cost(l).value);
  };
  const std::int64_t difference = signed_total(eco.trace.ledger) - signed_total(eager.trace.ledger);
  std::int64_t registration = 0;
  std::int64_t other = 0;
  for (const Step& step : eco.trace.steps) {
    (is_registration(step) ? registration : other) += static_cast<std::int64_t>(step.cost.cost.value);
  }
  const std::int64_t eager_total = signed_total(eager.trace.ledger);
  const std::string detail = fmt::format(
      "ecoact - eager = {} uc; registration steps = {} uc; residual = {} uc "
      "(ecoact non-registration steps {} uc vs eager steps {} uc: meta-tool declaration, roster "
      "and registration turns in later prompts)",
      difference, registration, difference - registration, other, eager_total);
  return {eco.trace.roster_size == 2 && difference == registration, detail};
}

// 4. Registered-ratio curve properties on every bundled script.
Outcome ratio_properties() {
  std::size_t curves = 0;
  for (const auto& [label, request] : bundled_runs()) {
    RunRequest r = request;
    r.config.engine = Engine::React;
    const Trace t = run_single(r).trace;
    const auto curve = registered_ratio_curve(t);
    if (curve.size() != t.steps.size()) return {false, label + ": curve length"};
    for (std::size_t i = 0; i < curve.size(); ++i) {
      if (curve[i].registered > curve[i].roster) return {false, label + ": ratio above 1"};
      if (i > 0 && curve[i].registered < curve[i - 1].registered) return {false, label + ": decreasing"};
    }
    std::set<std::string> registered;
    if (t.variant == Variant::Eager) {
      registered.insert(t.registered.begin(), t.registered.end());
    } else {
      for (const auto& e : t.registration_history) {
        if (e.outcome == RegistrationEventKind::Registered) registered.insert(e.tool_name);
      }
    }
    if (!curve.empty() && (curve.back().registered != registered.size() || curve.back().roster != t.roster_size)) {
      return {false, fmt::format("{}: final {}/{} vs history {}/{}", label, curve.back().registered,
                                 curve.back().roster, registered.size(), t.roster_size)};
    }
    ++curves;
  }
  return {true, fmt::format("{} curves nondecreasing, bounded, final value matches history", curves)};
}

// 5. Registration sequence independent of the reasoning engine.
Outcome engine_orthogonality() {
  std::size_t compared = 0;
  for (const auto& [label, request] : bundled_runs()) {
    RunRequest r = request;
    r.config.engine = Engine::React;
    const Trace react = run_single(r).trace;
    r.config.engine = Engine::Dfsdt;
    const Trace dfsdt = run_single(r).trace;
    const auto a = registration_sequence(react);
    const auto b = registration_sequence(dfsdt);
    if (a != b) {
      return {false, fmt::format("{}: react {} events vs dfsdt {} events", label, a.size(), b.size())};
    }
    ++compared;
  }
  return {true, fmt::format("{} scripts, identical sequences under react and dfsdt", compared)};
}

// 6. Pass-rate formulas.
Outcome pass_rates() {
  if (pass_rate_filtered(10, 5).percent_string() != "66.7") return {false, "filtered(10,5)"};
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t s = rng() % 1000, u = rng() % 1000;
    if (s + u == 0) continue;
    if (!(pass_rate_toolbench(0, s, u) == pass_rate_filtered(s, u))) {
      return {false, fmt::format("toolbench(0,{},{}) differs", s, u)};
    }
  }
  const Ratio inflated = pass_rate_toolbench(5, 0, 5);
  const Ratio filtered = pass_rate_filtered(0, 5);
  const bool ok = inflated.percent_string() == "50.0" && filtered.percent_string() == "0.0";
  return {ok, fmt::format("filtered(10,5)=66.7%, 1000 random pairs agree, (5,0,5): {}% vs {}%",
                          inflated.percent_string(), filtered.percent_string())};
}

// 7. Ablation flags.
Outcome ablations() {
  const RunResult single = run_single(bundled_request("q5_market_brief_ecoact"));
  const RunResult multiple =
      run_single(bundled_request("q5_market_brief_ecoact_multiple"));
  bool three_in_one = false;
  for (const auto& step : multiple.trace.steps) {
    if (const auto* reg = std::get_if<RegisterTool>(&step.action); reg != nullptr && reg->names.size() == 3) {
      three_in_one = true;
    }
  }
  const bool fewer_calls = multiple.trace.ledger.size() < single.trace.ledger.size() &&
                           multiple.trace.registered == single.trace.registered;

  std::size_t corpora = 0;
  for (const char* name : {"demo", "pair2", "sample50", "redundant30"}) {
    const ToolCorpus corpus = load_corpus(data(fmt::format("corpora/{}.json", name)));
    const auto count = [&](RegistrationContextMode mode) {
      const auto state = init_state(corpus, mode, MultiRegistrationPolicy::Single);
      return default_counter().count(state.render_roster(corpus));
    };
    if (count(RegistrationContextMode::NamePlusDescription) <= count(RegistrationContextMode::NameOnly)) {
      return {false, fmt::format("{}: descriptions do not enlarge the roster", name)};
    }
    ++corpora;
  }
  return {three_in_one && fewer_calls,
          fmt::format("multiple: 3-name registration {}, {} calls vs single {}; "
                      "name_plus_description > name_only on {} corpora",
                      three_in_one ? "accepted" : "missing", multiple.trace.ledger.size(),
                      single.trace.ledger.size(), corpora)};
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    files[fs::relative(entry.path(), root).string()] = strip_timestamps(ss.str());
  }
  return files;
}

// 8. Full bundled bench, twice, byte-stable modulo timestamps.
Outcome hermetic_replay() {
  const fs::path root = fs::temp_directory_path() / "ecoact_acceptance_bench";
  fs::remove_all(root);
  std::vector<std::map<std::string, std::string>> runs;
  for (int run = 0; run < 2; ++run) {
    const fs::path dir = root / fmt::format("run{}", run);
    BenchOptions paired;
    paired.config = base_config();
    paired.methods = BenchMethods::Paired;
    paired.output_dir = dir / "hermetic6";
    run_bench(load_suite(data("suites/hermetic6.json")), paired);

    BenchOptions restarts;
    restarts.config = base_config();
    restarts.config.engine = Engine::Dfsdt;
    restarts.methods = BenchMethods::Paired;
    restarts.output_dir = dir / "restarts";
    run_bench(load_suite(data("suites/restarts.json")), restarts);
    runs.push_back(read_tree(dir));
  }
  if (runs[0].empty()) return {false, "bench wrote nothing"};
  if (runs[0] != runs[1]) {
    for (const auto& [name, text] : runs[0]) {
      const auto it = runs[1].find(name);
      if (it == runs[1].end() || it->second != text) return {false, name + " differs between runs"};
    }
    return {false, "file sets differ between runs"};
  }
  fs::remove_all(root);
  return {true, fmt::format("{} output files identical across two runs", runs[0].size())};
}

struct Criterion {
  int id;
  std::string name;
  std::function<Outcome()> check;
  double limit_seconds;  // 0: no runtime bound
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "cost-model exactness", cost_exactness, 5.0},
      {2, "level-3 token savings >= 50%", level3_savings, 2.0},
      {3, "small-corpus regression", small_corpus_regression, 0.0},
      {4, "registered-ratio properties", ratio_properties, 1.0},
      {5, "engine orthogonality", engine_orthogonality, 0.0},
      {6, "pass-rate formulas", pass_rates, 0.0},
      {7, "ablation flags", ablations, 0.0},
      {8, "hermetic replay", hermetic_replay, 30.0},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  bool all_pass = true;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.contains(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && seconds >= c.limit_seconds) {
      outcome.pass = false;
      outcome.detail += fmt::format("; runtime {:.3f}s exceeds {:.0f}s", seconds, c.limit_seconds);
    }
    all_pass = all_pass && outcome.pass;
    std::cout << fmt::format("criterion {}: {} [{:.3f}s] {}: {}\n", c.id, outcome.pass ? "PASS" : "FAIL",
                             seconds, c.name, outcome.detail);
  }
  return all_pass ? EXIT_SUCCESS : EXIT_FAILURE;
}
