// SPDX-License-Identifier: Apache-2.0
#include "ecoact/trace_file.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <regex>
#include <sstream>

#include <fmt/format.h>

#include "ecoact/errors.hpp"

namespace ecoact {
namespace {

constexpr int kFormatVersion = 1;

Json step_json(const Step& step) {
  Json j{{"index", step.index}, {"thought", step.thought}};
  if (step.call) j["call"] = to_json(*step.call);
  j["action"] = to_json(step.action);
  j["observation"] = step.observation;
  if (step.annotation) j["annotation"] = *step.annotation;
  j["cost"] = to_json(step.cost);
  return j;
}

Step step_from_json(const Json& j) {
  Step step;
  step.index = j.at("index").get<std::size_t>();
  step.thought = j.at("thought").get<std::string>();
  if (j.contains("call")) step.call = function_call_from_json(j.at("call"));
  step.action = action_from_json(j.at("action"));
  step.observation = j.at("observation").get<std::string>();
  if (j.contains("annotation")) step.annotation = j.at("annotation").get<std::string>();
  step.cost = step_cost_from_json(j.at("cost"));
  return step;
}

RunConfig config_from_snapshot(const Json& j) {
  // The snapshot already carries the resolved pricing table; pricing_ref is
  // informational and must not trigger a reload.
  Json copy = j;
  copy.erase("pricing_ref");
  RunConfig config = apply_config_json(RunConfig{}, copy);
  config.pricing_ref = j.value("pricing_ref", std::string{});
  return config;
}

}  // namespace

std::string render_trace_file(const TraceHeader& header, const Trace& trace,
                              const std::optional<JudgeResult>& judged) {
  std::string out;
  Json head{{"type", "header"}, {"version", kFormatVersion}};
  if (!header.created_at.empty()) head["created_at"] = header.created_at;
  head["query_id"] = header.query_id;
  head["query"] = header.query;
  head["corpus_path"] = header.corpus_path;
  head["corpus_hash"] = header.corpus_hash;
  head["candidates"] = header.candidates;
  head["observations_path"] = header.observations_path;
  head["counter_id"] = header.counter_id;
  head["seed"] = header.config.seed;
  head["config"] = to_json(header.config);
  out += head.dump();
  out += '\n';

  for (std::size_t i = 0; i < trace.calls.size(); ++i) {
    const CallRecord& call = trace.calls[i];
    Json line{{"type", "step"},
              {"call", i + 1},
              {"node_id", call.node_id},
              {"parent_id", call.parent_id},
              {"depth", call.depth},
              {"request", to_json(call.request)},
              {"response", to_json(call.response)},
              {"step", step_json(call.step)}};
    out += line.dump();
    out += '\n';
  }

  Json history = Json::array();
  for (const auto& e : trace.registration_history) history.push_back(to_json(e));
  Json foot{{"type", "footer"},
            {"engine", to_string(trace.engine)},
            {"variant", to_string(trace.variant)},
            {"final", to_string(trace.final)},
            {"answer", trace.answer},
            {"steps", trace.steps.size()},
            {"backend_calls", trace.calls.size()},
            {"returned_path", trace.returned_path},
            {"restart_count", trace.restart_count},
            {"tree_nodes", trace.tree_nodes},
            {"roster_size", trace.roster_size},
            {"registered", trace.registered},
            {"registration_history", std::move(history)},
            {"ledger_totals",
             {{"input_tokens", trace.ledger.total_input_tokens()},
              {"output_tokens", trace.ledger.total_output_tokens()},
              {"cost_microcents", total_cost(trace.ledger).value},
              {"cost_cents", format_cents(total_cost(trace.ledger))}}}};
  if (judged) {
    foot["verdict"] = to_json(judged->verdict);
    foot["judge_calls"] = judged->calls;
    foot["judge_ledger"] = to_json(judged->ledger);
  }
  out += foot.dump();
  out += '\n';
  return out;
}

void write_trace_file(const std::filesystem::path& path, const TraceHeader& header,
                      const Trace& trace, const std::optional<JudgeResult>& judged) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write trace file {}", path.string()));
  out << render_trace_file(header, trace, judged);
}

LoadedTrace parse_trace_file(const std::string& text) {
  LoadedTrace loaded;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  bool have_footer = false;
  Json footer;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(fmt::format("trace line {}: {}", line_no, e.what()));
    }
    try {
      const std::string type = j.at("type").get<std::string>();
      if (type == "header") {
        if (have_header) throw ParseError("duplicate header");
        have_header = true;
        TraceHeader& h = loaded.header;
        h.config = config_from_snapshot(j.at("config"));
        h.query_id = j.value("query_id", std::string{});
        h.query = j.at("query").get<std::string>();
        h.corpus_path = j.at("corpus_path").get<std::string>();
        h.corpus_hash = j.value("corpus_hash", std::string{});
        h.candidates = j.value("candidates", std::vector<std::string>{});
        h.observations_path = j.value("observations_path", std::string{});
        h.counter_id = j.value("counter_id", std::string("rule-v1"));
        h.created_at = j.value("created_at", std::string{});
      } else if (type == "step") {
        if (!have_header || have_footer) throw ParseError("step record outside header/footer");
        CallRecord call;
        call.node_id = j.at("node_id").get<std::size_t>();
        call.parent_id = j.at("parent_id").get<std::size_t>();
        call.depth = j.at("depth").get<std::size_t>();
        call.request = request_from_json(j.at("request"));
        call.response = response_from_json(j.at("response"));
        call.step = step_from_json(j.at("step"));
        loaded.trace.ledger.append(call.step.cost);
        loaded.trace.calls.push_back(std::move(call));
      } else if (type == "footer") {
        if (!have_header) throw ParseError("footer before header");
        have_footer = true;
        footer = std::move(j);
      } else {
        throw ParseError(fmt::format("unknown record type '{}'", type));
      }
    } catch (const ParseError& e) {
      throw ParseError(fmt::format("trace line {}: {}", line_no, e.what()));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(fmt::format("trace line {}: {}", line_no, e.what()));
    } catch (const ConfigError& e) {
      throw ParseError(fmt::format("trace line {}: {}", line_no, e.what()));
    }
  }
  if (!have_header) throw ParseError("trace file has no header");
  if (!have_footer) throw ParseError("trace file has no footer");

  Trace& t = loaded.trace;
  try {
    t.query = loaded.header.query;
    t.engine = engine_from_string(footer.at("engine").get<std::string>());
    t.variant = variant_from_string(footer.at("variant").get<std::string>());
    t.final = final_kind_from_string(footer.at("final").get<std::string>());
    t.answer = footer.value("answer", std::string{});
    t.returned_path = footer.at("returned_path").get<std::vector<std::size_t>>();
    t.restart_count = footer.value("restart_count", std::size_t{0});
    t.tree_nodes = footer.value("tree_nodes", std::size_t{0});
    t.roster_size = footer.at("roster_size").get<std::size_t>();
    t.registered = footer.at("registered").get<std::vector<std::string>>();
    for (const auto& e : footer.at("registration_history")) {
      t.registration_history.push_back(registration_event_from_json(e));
    }
    if (footer.contains("verdict")) loaded.verdict = verdict_from_json(footer.at("verdict"));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(fmt::format("trace footer: {}", e.what()));
  }

  for (std::size_t node : t.returned_path) {
    const auto it = std::find_if(t.calls.begin(), t.calls.end(),
                                 [&](const CallRecord& c) { return c.node_id == node; });
    if (it == t.calls.end()) throw ParseError(fmt::format("returned path names missing node {}", node));
    t.steps.push_back(it->step);
  }
  return loaded;
}

LoadedTrace read_trace_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(fmt::format("cannot read trace file {}", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_trace_file(buffer.str());
}

std::string strip_timestamps(const std::string& jsonl) {
  static const std::regex pattern(R"re("created_at":"[^"]*",?)re");
  return std::regex_replace(jsonl, pattern, "");
}

std::string utc_timestamp_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace ecoact
