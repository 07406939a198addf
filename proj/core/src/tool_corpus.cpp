// SPDX-License-Identifier: Apache-2.0
#include "ecoact/tool_corpus.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "ecoact/errors.hpp"

namespace ecoact {
namespace {

// JSON-escaped string contents, without the surrounding quotes.
std::string escaped_contents(const std::string& s) {
  std::string quoted = Json(s).dump();
  return quoted.substr(1, quoted.size() - 2);
}

// Fixed key order: type, properties, required, then anything else as given.
Json canonical_parameters(const Json& in) {
  Json out = Json::object();
  for (const char* key : {"type", "properties", "required"}) {
    if (in.contains(key)) out[key] = in.at(key);
  }
  for (const auto& [key, value] : in.items()) {
    if (!out.contains(key)) out[key] = value;
  }
  return out;
}

void validate_tool(const ToolSpec& tool) {
  if (tool.name.empty()) throw ValidationError("", "tool with empty name");
  const auto fail = [&](const std::string& why) {
    throw ValidationError(tool.name, fmt::format("tool '{}': {}", tool.name, why));
  };
  const Json& p = tool.parameters;
  if (!p.is_object()) fail("parameters must be a JSON object");
  if (!p.contains("type") || p.at("type") != "object") fail("parameters.type must be \"object\"");
  if (p.contains("properties") && !p.at("properties").is_object()) {
    fail("parameters.properties must be an object");
  }
  if (p.contains("required")) {
    const Json& required = p.at("required");
    if (!required.is_array()) fail("parameters.required must be an array");
    for (const auto& r : required) {
      if (!r.is_string()) fail("parameters.required entries must be strings");
      const auto name = r.get<std::string>();
      if (!p.contains("properties") || !p.at("properties").contains(name)) {
        fail(fmt::format("required parameter '{}' is not declared in properties", name));
      }
    }
  }
}

ToolSpec tool_from_json(const Json& j, std::size_t position) {
  if (!j.is_object()) {
    throw ValidationError(fmt::format("#{}", position),
                          fmt::format("corpus element #{} is not an object", position));
  }
  ToolSpec tool;
  if (!j.contains("name") || !j.at("name").is_string()) {
    throw ValidationError(fmt::format("#{}", position),
                          fmt::format("corpus element #{} has no string \"name\"", position));
  }
  tool.name = j.at("name").get<std::string>();
  if (j.contains("description")) {
    if (!j.at("description").is_string()) {
      throw ValidationError(tool.name, fmt::format("tool '{}': description must be a string", tool.name));
    }
    tool.description = j.at("description").get<std::string>();
  }
  tool.parameters = j.contains("parameters")
                        ? j.at("parameters")
                        : Json{{"type", "object"}, {"properties", Json::object()}};
  if (j.contains("category") && !j.at("category").is_null()) {
    if (!j.at("category").is_string()) {
      throw ValidationError(tool.name, fmt::format("tool '{}': category must be a string", tool.name));
    }
    tool.category = j.at("category").get<std::string>();
  }
  validate_tool(tool);
  tool.parameters = canonical_parameters(tool.parameters);
  return tool;
}

}  // namespace

ToolCorpus::ToolCorpus(std::vector<ToolSpec> tools, std::string source_id)
    : tools_(std::move(tools)), source_id_(std::move(source_id)) {
  index_.reserve(tools_.size());
  for (std::size_t i = 0; i < tools_.size(); ++i) {
    validate_tool(tools_[i]);
    tools_[i].parameters = canonical_parameters(tools_[i].parameters);
    if (!index_.emplace(tools_[i].name, i).second) {
      throw ValidationError(tools_[i].name, fmt::format("duplicate tool name '{}'", tools_[i].name));
    }
  }
}

const ToolSpec* ToolCorpus::find(std::string_view name) const {
  const auto it = index_.find(std::string(name));
  return it == index_.end() ? nullptr : &tools_[it->second];
}

std::vector<std::string> ToolCorpus::names() const {
  std::vector<std::string> out;
  out.reserve(tools_.size());
  for (const auto& t : tools_) out.push_back(t.name);
  return out;
}

ToolCorpus ToolCorpus::subset(std::span<const std::string> names) const {
  std::vector<ToolSpec> picked;
  picked.reserve(names.size());
  for (const auto& n : names) {
    const ToolSpec* tool = find(n);
    if (tool == nullptr) throw UnknownTool(n);
    picked.push_back(*tool);
  }
  return ToolCorpus(std::move(picked), source_id_);
}

ToolCorpus corpus_from_json(const Json& document, std::string source_id) {
  if (!document.is_array()) throw ParseError("corpus document must be a JSON array of tools");
  std::vector<ToolSpec> tools;
  tools.reserve(document.size());
  for (std::size_t i = 0; i < document.size(); ++i) tools.push_back(tool_from_json(document[i], i));
  return ToolCorpus(std::move(tools), std::move(source_id));
}

ToolCorpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("corpus not found: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  Json document;
  try {
    document = Json::parse(buffer.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(fmt::format("corpus {}: {}", path.string(), e.what()));
  }
  return corpus_from_json(document, path.string());
}

Json to_json(const ToolSpec& tool) {
  Json j = declaration_json(tool);
  if (tool.category) j["category"] = *tool.category;
  return j;
}

Json to_json(const ToolCorpus& corpus) {
  Json out = Json::array();
  for (const auto& t : corpus.tools()) out.push_back(to_json(t));
  return out;
}

std::string_view to_string(RegistrationContextMode mode) {
  switch (mode) {
    case RegistrationContextMode::Full:
      return "full";
    case RegistrationContextMode::NameOnly:
      return "name_only";
    case RegistrationContextMode::NamePlusDescription:
      return "name_plus_description";
  }
  return "name_only";
}

RegistrationContextMode mode_from_string(std::string_view text) {
  if (text == "full") return RegistrationContextMode::Full;
  if (text == "name_only") return RegistrationContextMode::NameOnly;
  if (text == "name_plus_description") return RegistrationContextMode::NamePlusDescription;
  throw ConfigError(fmt::format("unknown registration context mode '{}'", text));
}

Json declaration_json(const ToolSpec& tool) {
  return Json{{"name", tool.name}, {"description", tool.description}, {"parameters", tool.parameters}};
}

std::string serialize_declaration(const ToolSpec& tool) { return declaration_json(tool).dump(); }

std::string join_declarations(std::span<const std::string> declarations) {
  if (declarations.empty()) return {};
  std::string out = "[";
  for (std::size_t i = 0; i < declarations.size(); ++i) {
    if (i > 0) out += ',';
    out += declarations[i];
  }
  out += ']';
  return out;
}

ComponentTokenBreakdown component_breakdown(const ToolSpec& tool, const TokenCounter& counter) {
  ComponentTokenBreakdown b;
  b.name_tokens = counter.count(escaped_contents(tool.name));
  b.description_tokens = counter.count(escaped_contents(tool.description));
  b.parameter_tokens = counter.count(tool.parameters.dump());
  b.total_tokens = b.name_tokens + b.description_tokens + b.parameter_tokens;
  return b;
}

TokenCount declaration_framing_tokens(const TokenCounter& counter) {
  return counter.count(R"({"name":"","description":"","parameters":})");
}

std::string serialize_subset(std::span<const std::string> names, const ToolCorpus& corpus,
                             RegistrationContextMode mode) {
  std::vector<const ToolSpec*> tools;
  tools.reserve(names.size());
  for (const auto& n : names) {
    const ToolSpec* t = corpus.find(n);
    if (t == nullptr) throw UnknownTool(n);
    tools.push_back(t);
  }
  if (mode == RegistrationContextMode::Full) {
    std::vector<std::string> decls;
    decls.reserve(tools.size());
    for (const auto* t : tools) decls.push_back(serialize_declaration(*t));
    return join_declarations(decls);
  }
  std::string out;
  for (std::size_t i = 0; i < tools.size(); ++i) {
    if (i > 0) out += '\n';
    out += tools[i]->name;
    if (mode == RegistrationContextMode::NamePlusDescription) {
      out += ": ";
      out += tools[i]->description;
    }
  }
  return out;
}

TokenCount corpus_token_length(std::span<const std::string> names, const ToolCorpus& corpus,
                               RegistrationContextMode mode, const TokenCounter& counter) {
  return counter.count(serialize_subset(names, corpus, mode));
}

CorpusComponentShares component_shares(const ToolCorpus& corpus, const TokenCounter& counter) {
  CorpusComponentShares shares;
  for (const auto& tool : corpus.tools()) {
    const auto b = component_breakdown(tool, counter);
    shares.totals.name_tokens += b.name_tokens;
    shares.totals.description_tokens += b.description_tokens;
    shares.totals.parameter_tokens += b.parameter_tokens;
    shares.totals.total_tokens += b.total_tokens;
  }
  if (shares.totals.total_tokens > 0) {
    const double total = static_cast<double>(shares.totals.total_tokens);
    shares.name_fraction = static_cast<double>(shares.totals.name_tokens) / total;
    shares.description_fraction = static_cast<double>(shares.totals.description_tokens) / total;
    shares.parameter_fraction = static_cast<double>(shares.totals.parameter_tokens) / total;
  }
  return shares;
}

}  // namespace ecoact
