// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "ecoact/backend.hpp"
#include "ecoact/errors.hpp"
#include "ecoact/http_backend.hpp"
#include "ecoact/scripted_backend.hpp"
#include "test_support.hpp"

namespace ecoact {
namespace {

using namespace test;

BackendRequest user_request(const std::string& text, std::vector<std::string> decls = {}) {
  BackendRequest r;
  r.model_id = "gpt-4o";
  r.messages.push_back(Message{Role::User, text, std::nullopt, ""});
  r.function_declarations = std::move(decls);
  return r;
}

TEST(SerializeRequest, LegacyFunctionsShape) {
  BackendRequest r = user_request("hi", {R"({"name":"f","description":"","parameters":{"type":"object"}})"});
  r.messages.push_back(Message{Role::Assistant, "", FunctionCall{"f", "{}"}, ""});
  r.messages.push_back(Message{Role::Tool, "done", std::nullopt, "f"});
  r.seed = 7;
  EXPECT_EQ(serialize_request(r),
            R"({"model":"gpt-4o","messages":[{"role":"user","content":"hi"},)"
            R"({"role":"assistant","content":"","function_call":{"name":"f","arguments":"{}"}},)"
            R"({"role":"function","name":"f","content":"done"}],)"
            R"("functions":[{"name":"f","description":"","parameters":{"type":"object"}}],)"
            R"("temperature":0.0,"seed":7})");
}

TEST(SerializeRequest, NoFunctionsFieldWhenNothingDeclared) {
  EXPECT_EQ(serialize_request(user_request("hi")).find("functions"), std::string::npos);
}

TEST(SerializeRequest, JsonRoundTrip) {
  BackendRequest r = user_request("hi", {finish_declaration_for_test()});
  r.seed = 3;
  const BackendRequest back = request_from_json(to_json(r));
  EXPECT_EQ(back.messages, r.messages);
  EXPECT_EQ(back.function_declarations, r.function_declarations);
  EXPECT_EQ(back.seed, r.seed);
}

TEST(MeasureUsage, CounterFallback) {
  const BackendRequest r = user_request("hi");
  BackendResponse reply = call("f", Json{{"a", 1}}, "ok");
  // [{"role":"user","content":"hi"}] is 19 tokens; "ok" + "f" + {"a":1} is 1 + 1 + 7.
  const auto u = measure_usage(r, reply, default_counter());
  EXPECT_EQ(u.prompt_tokens, 19u);
  EXPECT_EQ(u.completion_tokens, 9u);
  EXPECT_EQ(u.source, UsageSource::Counter);
}

TEST(MeasureUsage, DeclarationsCountTowardsPrompt) {
  const std::string decl = R"({"name":"f","description":"","parameters":{"type":"object"}})";
  const auto with = measure_usage(user_request("hi", {decl}), text_only(""), default_counter());
  const auto without = measure_usage(user_request("hi"), text_only(""), default_counter());
  EXPECT_EQ(with.prompt_tokens - without.prompt_tokens, default_counter().count("[" + decl + "]"));
}

TEST(MeasureUsage, ProviderUsageWins) {
  BackendResponse reply = text_only("ok");
  reply.usage = Usage{1234, 56};
  const auto u = measure_usage(user_request("hi"), reply, default_counter());
  EXPECT_EQ(u.prompt_tokens, 1234u);
  EXPECT_EQ(u.completion_tokens, 56u);
  EXPECT_EQ(u.source, UsageSource::Provider);
}

TEST(ScriptedBackend, OrderGlobalReplay) {
  ScriptedBackend backend(sequence({reg("a"), call("a", Json{{"x", "1"}}), answer("done")}));
  const auto r = user_request("q");
  EXPECT_EQ(backend.chat(r).function_call->name, "tool_register");
  EXPECT_EQ(backend.chat(r).function_call->name, "a");
  EXPECT_EQ(backend.chat(r).function_call->name, "Finish");
  EXPECT_THROW(backend.chat(r), ScriptExhausted);
  EXPECT_EQ(backend.calls(), 4u);
}

TEST(ScriptedBackend, RepeatLastOnExhaustion) {
  ScriptedBackend backend(sequence({answer("x")}, Exhaustion::RepeatLast));
  const auto r = user_request("q");
  backend.chat(r);
  EXPECT_EQ(backend.chat(r).function_call->arguments, answer("x").function_call->arguments);
}

TEST(ScriptedBackend, RulesMatchOnRequestContents) {
  ScriptedPolicy policy;
  policy.rules.push_back(at_turn(0, text_only("turn zero with weather"), {"weather"}));
  policy.rules.push_back(at_turn(0, text_only("turn zero")));
  ScriptRule declares;
  declares.match.declares = "Finish";
  declares.response = text_only("finish declared");
  policy.rules.push_back(declares);
  ScriptedBackend backend(policy);

  EXPECT_EQ(backend.chat(user_request("what is the weather")).assistant_content, "turn zero with weather");
  EXPECT_EQ(backend.chat(user_request("hello")).assistant_content, "turn zero");

  BackendRequest later = user_request("hello", {finish_declaration_for_test()});
  later.messages.push_back(Message{Role::Assistant, "", std::nullopt, ""});
  EXPECT_EQ(backend.chat(later).assistant_content, "finish declared");
  later.function_declarations.clear();
  EXPECT_THROW(backend.chat(later), ScriptExhausted);
}

TEST(ScriptedBackend, TimesLimitsRuleUse) {
  ScriptedPolicy policy;
  ScriptRule once;
  once.response = text_only("first");
  once.times = 1;
  ScriptRule always;
  always.response = text_only("later");
  policy.rules = {once, always};
  ScriptedBackend backend(policy);
  const auto r = user_request("q");
  EXPECT_EQ(backend.chat(r).assistant_content, "first");
  EXPECT_EQ(backend.chat(r).assistant_content, "later");
  EXPECT_EQ(backend.chat(r).assistant_content, "later");
}

TEST(ScriptedBackend, ScriptJsonRoundTrip) {
  const Json doc = Json::parse(R"({"exhaustion":"repeat_last","rules":[
      {"match":{"turn":1,"contains":["x"],"excludes":"y","last_contains":"z","declares":"f"},
       "response":{"content":"c","function_call":{"name":"f","arguments":{"k":1}}},"times":2}]})");
  const ScriptedPolicy p = script_from_json(doc);
  ASSERT_EQ(p.rules.size(), 1u);
  EXPECT_EQ(p.rules[0].response.function_call->arguments, R"({"k":1})");
  EXPECT_EQ(to_json(script_from_json(to_json(p))), to_json(p));
  EXPECT_THROW(script_from_json(Json{{"exhaustion", "loop"}}), ParseError);
}

TEST(ScriptedBackend, RecordedSessionReplaysIdentically) {
  ScriptedPolicy policy;
  policy.rules.push_back(at_turn(0, reg("a")));
  policy.rules.push_back(at_turn(1, call("a", Json{{"x", "v"}})));
  policy.rules.push_back(at_turn(2, answer("fine")));
  ScriptedBackend live(policy);

  std::vector<BackendRequest> requests;
  std::vector<BackendResponse> responses;
  BackendRequest r = user_request("q");
  for (int i = 0; i < 3; ++i) {
    requests.push_back(r);
    responses.push_back(live.chat(r));
    r.messages.push_back(Message{Role::Assistant, "", responses.back().function_call, ""});
  }
  ScriptedBackend replay(replay_script(responses, Exhaustion::Error));
  for (std::size_t i = 0; i < requests.size(); ++i) {
    const auto again = replay.chat(requests[i]);
    EXPECT_EQ(again.function_call, responses[i].function_call);
    EXPECT_EQ(again.assistant_content, responses[i].assistant_content);
  }
}

class FlakyBackend final : public Backend {
 public:
  explicit FlakyBackend(int failures, bool rate_limit) : failures_(failures), rate_limit_(rate_limit) {}
  BackendResponse chat(const BackendRequest&) override {
    ++calls;
    if (calls <= failures_) {
      if (rate_limit_) throw RateLimited("slow down", std::chrono::milliseconds(2000));
      throw TransportError("connection reset");
    }
    return text_only("ok");
  }
  int calls{0};

 private:
  int failures_;
  bool rate_limit_;
};

TEST(ChatWithRetries, RecoversAfterTransientFailures) {
  FlakyBackend backend(2, false);
  std::vector<std::chrono::milliseconds> waits;
  RetryPolicy policy{3, std::chrono::milliseconds(100), [&](auto d) { waits.push_back(d); }};
  EXPECT_EQ(chat_with_retries(backend, user_request("q"), policy).assistant_content, "ok");
  EXPECT_EQ(backend.calls, 3);
  EXPECT_EQ(waits, (std::vector<std::chrono::milliseconds>{std::chrono::milliseconds(100),
                                                           std::chrono::milliseconds(200)}));
}

TEST(ChatWithRetries, RateLimitHonoursRetryAfter) {
  FlakyBackend backend(1, true);
  std::vector<std::chrono::milliseconds> waits;
  RetryPolicy policy{3, std::chrono::milliseconds(100), [&](auto d) { waits.push_back(d); }};
  chat_with_retries(backend, user_request("q"), policy);
  ASSERT_EQ(waits.size(), 1u);
  EXPECT_EQ(waits[0], std::chrono::milliseconds(2000));
}

TEST(ChatWithRetries, GivesUpAfterBudget) {
  FlakyBackend backend(10, false);
  RetryPolicy policy{3, std::chrono::milliseconds(0), [](auto) {}};
  EXPECT_THROW(chat_with_retries(backend, user_request("q"), policy), BackendError);
  EXPECT_EQ(backend.calls, 3);
}

TEST(ChatWithRetries, ExhaustedScriptIsNotRetried) {
  ScriptedBackend backend(sequence({}));
  RetryPolicy policy{3, std::chrono::milliseconds(0), [](auto) {}};
  EXPECT_THROW(chat_with_retries(backend, user_request("q"), policy), ScriptExhausted);
  EXPECT_EQ(backend.calls(), 1u);
}

TEST(Redact, ReplacesEverySecretOccurrence) {
  EXPECT_EQ(redact("Bearer sk-123 and sk-123", "sk-123"), "Bearer [REDACTED] and [REDACTED]");
  EXPECT_EQ(redact("nothing here", ""), "nothing here");
}

TEST(ParseChatCompletion, FunctionCallAndUsage) {
  const auto r = parse_chat_completion(
      R"({"choices":[{"message":{"role":"assistant","content":null,)"
      R"("function_call":{"name":"f","arguments":"{\"a\":1}"}}}],)"
      R"("usage":{"prompt_tokens":10,"completion_tokens":2}})");
  EXPECT_EQ(r.assistant_content, "");
  EXPECT_EQ(r.function_call, (FunctionCall{"f", R"({"a":1})"}));
  EXPECT_EQ(r.usage, (Usage{10, 2}));
}

TEST(ParseChatCompletion, ToolCallsShape) {
  const auto r = parse_chat_completion(
      R"({"choices":[{"message":{"content":"t","tool_calls":[{"function":{"name":"g","arguments":"{}"}}]}}]})");
  EXPECT_EQ(r.function_call->name, "g");
  EXPECT_FALSE(r.usage.has_value());
}

TEST(ParseChatCompletion, SchemaErrors) {
  EXPECT_THROW(parse_chat_completion("not json"), SchemaError);
  EXPECT_THROW(parse_chat_completion(R"({"choices":[]})"), SchemaError);
  EXPECT_THROW(parse_chat_completion(R"({"choices":[{}]})"), SchemaError);
  EXPECT_THROW(parse_chat_completion(R"({"choices":[{"message":{"function_call":{}}}]})"), SchemaError);
}

}  // namespace
}  // namespace ecoact
