// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "ecoact/errors.hpp"
#include "ecoact/prompts.hpp"
#include "ecoact/reasoning.hpp"
#include "ecoact/scripted_backend.hpp"
#include "test_support.hpp"

namespace ecoact {
namespace {

using namespace test;

class FixedExecutor final : public Executor {
 public:
  explicit FixedExecutor(std::string text) : text_(std::move(text)) {}
  std::string execute(const std::string&, const Json&) override {
    ++calls;
    return text_;
  }
  int calls{0};

 private:
  std::string text_;
};

RunConfig small_config(std::size_t max_steps = 8) {
  RunConfig c;
  c.max_steps = max_steps;
  c.max_total_steps = 20;
  c.retries = 1;
  c.backoff_ms = 0;
  return c;
}

std::string error_of(const Step& step) { return Json::parse(step.observation).at("error").get<std::string>(); }

TEST(ParseAction, Register) {
  EXPECT_EQ(parse_action(reg("a"), true), Action(RegisterTool{{"a"}}));
  EXPECT_EQ(parse_action(reg_many({"a", "b"}), true), Action(RegisterTool{{"a", "b"}}));
  // Without the meta-tool it is just a call to an unknown function.
  EXPECT_TRUE(std::holds_alternative<InvokeTool>(parse_action(reg("a"), false)));
  // Unusable arguments become an empty registration request.
  EXPECT_EQ(parse_action(call("tool_register", Json{{"name", "a"}}), true), Action(RegisterTool{}));
}

TEST(ParseAction, InvokeAndFinish) {
  EXPECT_EQ(parse_action(call("f", Json{{"x", 1}}), true), Action(InvokeTool{"f", Json{{"x", 1}}}));
  EXPECT_EQ(parse_action(answer("42"), true), Action(FinishAction{FinishKind::GiveAnswer, "42"}));
  EXPECT_EQ(parse_action(give_up(), true), Action(FinishAction{FinishKind::GiveUpAndRestart, ""}));
  BackendResponse empty_args;
  empty_args.function_call = FunctionCall{"f", "  "};
  EXPECT_EQ(parse_action(empty_args, true), Action(InvokeTool{"f", Json::object()}));
}

TEST(ParseAction, Malformed) {
  EXPECT_TRUE(std::holds_alternative<MalformedOutput>(parse_action(text_only("I think..."), true)));
  BackendResponse bad;
  bad.function_call = FunctionCall{"f", "{not json"};
  EXPECT_TRUE(std::holds_alternative<MalformedOutput>(parse_action(bad, true)));
  bad.function_call = FunctionCall{"f", "[1,2]"};
  EXPECT_TRUE(std::holds_alternative<MalformedOutput>(parse_action(bad, true)));
  EXPECT_TRUE(std::holds_alternative<MalformedOutput>(
      parse_action(call("Finish", Json{{"return_type", "maybe"}}), true)));
}

TEST(ParseAction, JsonRoundTrip) {
  for (const Action& a : {Action(RegisterTool{{"a", "b"}}), Action(InvokeTool{"f", Json{{"k", "v"}}}),
                          Action(FinishAction{FinishKind::GiveAnswer, "x"}),
                          Action(FinishAction{FinishKind::GiveUpAndRestart, ""}),
                          Action(MalformedOutput{"why"})}) {
    EXPECT_EQ(action_from_json(to_json(a)), a);
  }
}

TEST(AssemblePrompt, MessageCounts) {
  const ToolCorpus corpus = simple_corpus(3);
  const auto state = init_state(corpus, RegistrationContextMode::NameOnly, MultiRegistrationPolicy::Single);
  const auto initial = assemble_prompt(state, corpus, "find x", {}, PromptVariant::EcoAct);
  ASSERT_EQ(initial.size(), 2u);
  EXPECT_EQ(initial[0].role, Role::System);
  EXPECT_EQ(initial[0].content, prompts::kEcoActSystem);
  EXPECT_EQ(initial[1].content, "find x\n\n" + state.render_roster(corpus));

  std::vector<Step> history(3);
  for (auto& s : history) s.call = FunctionCall{"f", "{}"};
  const auto later = assemble_prompt(state, corpus, "find x", history, PromptVariant::EcoAct);
  EXPECT_EQ(later.size(), 2u + 2u * 3u);
  EXPECT_EQ(later.back().role, Role::Tool);
  EXPECT_EQ(later.back().name, "f");

  const auto eager = assemble_prompt(RegistrationState::eager(corpus), corpus, "find x", {}, PromptVariant::Eager);
  EXPECT_EQ(eager[0].content, prompts::kEagerSystem);
  EXPECT_EQ(eager[1].content, "find x");
}

TEST(React, RegisterInvokeFinish) {
  const ToolCorpus corpus = simple_corpus(30);
  ScriptedBackend backend(sequence({reg("tool4"), call("tool4", Json{{"x", "1"}}), answer("done")}));
  FixedExecutor exec(R"({"error":"","response":"ok"})");
  const Trace t = run_react("q", corpus, backend, small_config(), {&exec});

  ASSERT_EQ(t.steps.size(), 3u);
  EXPECT_EQ(t.final, FinalKind::Answer);
  EXPECT_EQ(t.answer, "done");
  EXPECT_EQ(t.registered, std::vector<std::string>{"tool4"});
  EXPECT_EQ(t.roster_size, 30u);
  EXPECT_EQ(t.ledger.size(), 3u);
  EXPECT_EQ(t.tree_nodes, 4u);
  EXPECT_EQ(t.returned_path, (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_EQ(t.steps[1].observation, R"({"error":"","response":"ok"})");
  EXPECT_EQ(t.steps[2].observation, prompts::kFinishObservation);
  EXPECT_EQ(registration_sequence(t),
            (std::vector<RegistrationEvent>{{1, "tool4", RegistrationEventKind::Registered}}));

  // Step 1 declares only the meta-tool and Finish; step 2 adds tool4.
  const auto requests = backend.recorded_requests();
  EXPECT_EQ(requests[0].function_declarations.size(), 2u);
  EXPECT_EQ(requests[1].function_declarations.size(), 3u);
  EXPECT_GT(t.ledger.steps[1].tool_context_tokens, t.ledger.steps[0].tool_context_tokens);
  for (const auto& c : t.ledger.steps) EXPECT_EQ(c.source, UsageSource::Counter);
}

TEST(React, StopsAtMaxSteps) {
  const ToolCorpus corpus = simple_corpus(3);
  ScriptedBackend backend(sequence({reg("tool1"), call("tool1", Json{{"x", "a"}})}, Exhaustion::RepeatLast));
  const Trace t = run_react("q", corpus, backend, small_config(5));
  EXPECT_EQ(t.steps.size(), 5u);
  EXPECT_EQ(t.final, FinalKind::BudgetExhausted);
  EXPECT_TRUE(t.answer.empty());
}

TEST(React, InvokingUnregisteredToolIsRecoverable) {
  const ToolCorpus corpus = simple_corpus(5);
  ScriptedBackend backend(sequence({reg("tool1"), call("tool2", Json{{"x", "a"}}),
                                    call("tool1", Json{{"x", "a"}}), answer("ok")}));
  const Trace t = run_react("q", corpus, backend, small_config());
  ASSERT_EQ(t.steps.size(), 4u);
  EXPECT_EQ(t.final, FinalKind::Answer);
  EXPECT_NE(error_of(t.steps[1]).find("not registered"), std::string::npos);
  EXPECT_TRUE(error_of(t.steps[2]).empty());
}

TEST(React, UnknownFunction) {
  const ToolCorpus corpus = simple_corpus(2);
  ScriptedBackend backend(sequence({call("nope", Json::object()), answer("x")}));
  const Trace t = run_react("q", corpus, backend, small_config());
  EXPECT_EQ(error_of(t.steps[0]), "no such function: nope");
}

TEST(React, MalformedLimitEndsRun) {
  const ToolCorpus corpus = simple_corpus(2);
  ScriptedBackend backend(sequence({text_only("hmm")}, Exhaustion::RepeatLast));
  RunConfig c = small_config(10);
  c.malformed_limit = 3;
  const Trace t = run_react("q", corpus, backend, c);
  EXPECT_EQ(t.steps.size(), 3u);
  EXPECT_EQ(t.final, FinalKind::BudgetExhausted);
  EXPECT_NE(error_of(t.steps[0]).find("tool_register"), std::string::npos);
}

TEST(React, MalformedCounterResetsOnValidAction) {
  const ToolCorpus corpus = simple_corpus(2);
  ScriptedBackend backend(sequence({text_only("a"), text_only("b"), reg("tool1"), text_only("c"),
                                    text_only("d"), answer("x")}));
  RunConfig c = small_config(10);
  c.malformed_limit = 3;
  EXPECT_EQ(run_react("q", corpus, backend, c).final, FinalKind::Answer);
}

TEST(React, GiveUpEndsRun) {
  const ToolCorpus corpus = simple_corpus(2);
  ScriptedBackend backend(sequence({give_up()}));
  const Trace t = run_react("q", corpus, backend, small_config());
  EXPECT_EQ(t.final, FinalKind::GiveUp);
  EXPECT_EQ(t.steps[0].observation, prompts::kGiveUpObservation);
}

TEST(React, BadRegistrationRequestGetsCorrectiveObservation) {
  const ToolCorpus corpus = simple_corpus(2);
  ScriptedBackend backend(sequence({call("tool_register", Json::object()), answer("x")}));
  const Trace t = run_react("q", corpus, backend, small_config());
  EXPECT_FALSE(error_of(t.steps[0]).empty());
  EXPECT_TRUE(t.registered.empty());
}

TEST(React, ObservationTruncation) {
  const ToolCorpus corpus = simple_corpus(1);
  std::string big;
  for (int i = 0; i < 200; ++i) big += "word ";
  FixedExecutor exec(big);
  ScriptedBackend backend(sequence({reg("tool1"), call("tool1", Json{{"x", "a"}}), answer("x")}));
  RunConfig c = small_config();
  c.obs_token_limit = 10;
  const Trace t = run_react("q", corpus, backend, c, {&exec});
  const std::string& obs = t.steps[1].observation;
  const std::string marker = " ...[truncated]";
  ASSERT_GT(obs.size(), marker.size());
  EXPECT_EQ(obs.substr(obs.size() - marker.size()), marker);
  EXPECT_LE(default_counter().count(obs.substr(0, obs.size() - marker.size())), 10u);
}

TEST(React, ProviderUsageIsRecorded) {
  const ToolCorpus corpus = simple_corpus(2);
  BackendResponse r = answer("x");
  r.usage = Usage{5000, 20};
  ScriptedBackend backend(sequence({r}));
  const Trace t = run_react("q", corpus, backend, small_config());
  const StepCost& c = t.ledger.steps[0];
  EXPECT_EQ(c.source, UsageSource::Provider);
  EXPECT_EQ(c.input_tokens(), 5000u);
  EXPECT_EQ(c.output_tokens, 20u);
  EXPECT_EQ(c.cost.value, 5000u * 250u + 20u * 1000u);
}

class RateLimitedOnce final : public Backend {
 public:
  BackendResponse chat(const BackendRequest&) override {
    if (calls++ == 0) throw RateLimited("429", std::chrono::milliseconds(0));
    return answer("x");
  }
  int calls{0};
};

TEST(React, RetriesRateLimitedCalls) {
  const ToolCorpus corpus = simple_corpus(2);
  RateLimitedOnce backend;
  RunConfig c = small_config();
  c.retries = 3;
  int sleeps = 0;
  RunServices services;
  services.sleep = [&](auto) { ++sleeps; };
  const Trace t = run_react("q", corpus, backend, c, services);
  EXPECT_EQ(t.final, FinalKind::Answer);
  EXPECT_EQ(backend.calls, 2);
  EXPECT_EQ(t.ledger.size(), 1u);
}

TEST(React, EagerOnEmptyCorpusDeclaresOnlyFinish) {
  const ToolCorpus corpus;
  ScriptedBackend backend(sequence({answer("nothing to do")}));
  const Trace t = run_eager_baseline("q", corpus, backend, small_config());
  EXPECT_EQ(t.final, FinalKind::Answer);
  EXPECT_EQ(backend.recorded_requests()[0].function_declarations.size(), 1u);
  EXPECT_EQ(t.variant, Variant::Eager);
}

TEST(React, RejectsZeroSteps) {
  ScriptedBackend backend(sequence({}));
  EXPECT_THROW(run_react("q", simple_corpus(1), backend, small_config(0)), ConfigError);
}

ScriptedPolicy retry_policy() {
  ScriptedPolicy p;
  p.rules.push_back(at_turn(0, reg("tool1")));
  p.rules.push_back(at_turn(1, call("tool1", Json{{"x", "again"}}), {"Previous attempt failed"}));
  p.rules.push_back(at_turn(1, give_up()));
  p.rules.push_back(at_turn(2, answer("second try")));
  return p;
}

TEST(Dfsdt, BacktracksAfterGiveUp) {
  const ToolCorpus corpus = simple_corpus(3);
  RunConfig c = small_config();
  c.engine = Engine::Dfsdt;
  ScriptedBackend backend(retry_policy());
  const Trace t = run_trace("q", corpus, backend, c);

  EXPECT_EQ(t.final, FinalKind::Answer);
  EXPECT_EQ(t.answer, "second try");
  EXPECT_EQ(t.restart_count, 1u);
  EXPECT_EQ(t.tree_nodes, 5u);
  EXPECT_EQ(t.steps.size(), 3u);
  EXPECT_EQ(t.returned_path, (std::vector<std::size_t>{1, 3, 4}));
  EXPECT_EQ(t.ledger.size(), 4u);
  ASSERT_TRUE(t.steps[1].annotation.has_value());
  EXPECT_EQ(*t.steps[1].annotation,
            "Previous attempt failed. This is not your first try from this state; these continuations "
            "already failed:\n1. {\"name\":\"Finish\",\"arguments\":\"{\\\"return_type\\\":\\\"give_up_and_restart\\\"}\"}"
            "\nTry something different from them.");
  // The abandoned branch does not leak into the returned path's registrations.
  EXPECT_EQ(t.registered, std::vector<std::string>{"tool1"});
}

TEST(Dfsdt, ImmediateSuccessMatchesReact) {
  const ToolCorpus corpus = simple_corpus(3);
  const auto script = [] { return sequence({reg("tool2"), call("tool2", Json{{"x", "a"}}), answer("y")}); };
  RunConfig c = small_config();
  ScriptedBackend b1(script());
  const Trace react = run_react("q", corpus, b1, c);
  ScriptedBackend b2(script());
  const Trace dfsdt = run_dfsdt("q", corpus, b2, c);
  EXPECT_EQ(to_json(dfsdt.ledger), to_json(react.ledger));
  EXPECT_EQ(dfsdt.steps.size(), react.steps.size());
  EXPECT_EQ(dfsdt.restart_count, 0u);
  EXPECT_EQ(dfsdt.answer, react.answer);
}

TEST(Dfsdt, TotalBudgetOfOne) {
  const ToolCorpus corpus = simple_corpus(3);
  RunConfig c = small_config();
  c.max_total_steps = 1;
  ScriptedBackend backend(sequence({reg("tool1"), answer("never")}));
  const Trace t = run_dfsdt("q", corpus, backend, c);
  EXPECT_EQ(backend.calls(), 1u);
  EXPECT_EQ(t.final, FinalKind::BudgetExhausted);
  EXPECT_EQ(t.tree_nodes, 2u);
}

TEST(Dfsdt, ExhaustsBoundedTree) {
  const ToolCorpus corpus = simple_corpus(3);
  RunConfig c = small_config();
  c.dfsdt_max_children = 2;
  ScriptedBackend backend(sequence({give_up()}, Exhaustion::RepeatLast));
  const Trace t = run_dfsdt("q", corpus, backend, c);
  EXPECT_EQ(backend.calls(), 2u);
  EXPECT_EQ(t.final, FinalKind::BudgetExhausted);
  EXPECT_EQ(t.restart_count, 2u);
}

TEST(Dfsdt, MalformedRunIsAbandonedAsAWhole) {
  const ToolCorpus corpus = simple_corpus(3);
  RunConfig c = small_config();
  c.malformed_limit = 2;
  ScriptedPolicy p;
  p.rules.push_back(at_turn(0, reg("tool1")));
  p.rules.push_back(at_turn(1, answer("recovered"), {"Previous attempt failed"}));
  p.rules.push_back(at_turn(1, text_only("uh")));
  p.rules.push_back(at_turn(2, text_only("uh")));
  ScriptedBackend backend(p);
  const Trace t = run_dfsdt("q", corpus, backend, c);
  EXPECT_EQ(t.final, FinalKind::Answer);
  EXPECT_EQ(t.returned_path, (std::vector<std::size_t>{1, 4}));
  EXPECT_EQ(t.restart_count, 1u);
}

TEST(Dfsdt, DepthLimitTriggersBacktrack) {
  const ToolCorpus corpus = simple_corpus(3);
  RunConfig c = small_config(2);
  c.max_total_steps = 6;
  ScriptedBackend backend(sequence({reg("tool1")}, Exhaustion::RepeatLast));
  const Trace t = run_dfsdt("q", corpus, backend, c);
  EXPECT_EQ(backend.calls(), 6u);
  EXPECT_GE(t.restart_count, 1u);
  for (const auto& call : t.calls) EXPECT_LE(call.depth, 2u);
}

}  // namespace
}  // namespace ecoact
