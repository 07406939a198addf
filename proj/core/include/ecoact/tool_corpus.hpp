// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ecoact/common.hpp"
#include "ecoact/token_counter.hpp"

namespace ecoact {

struct ToolSpec {
  std::string name;
  std::string description;
  Json parameters;  // JSON-Schema object: type, properties, required
  std::optional<std::string> category;
};

/// Immutable, ordered set of tools. Lookup is by name only.
class ToolCorpus {
 public:
  ToolCorpus() = default;
  /// Validates every tool; throws ValidationError naming the first bad one.
  ToolCorpus(std::vector<ToolSpec> tools, std::string source_id);

  const std::vector<ToolSpec>& tools() const { return tools_; }
  const std::string& source_id() const { return source_id_; }
  std::size_t size() const { return tools_.size(); }
  bool empty() const { return tools_.empty(); }

  const ToolSpec* find(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }
  std::vector<std::string> names() const;

  /// New corpus holding `names` in the given order. Throws UnknownTool.
  ToolCorpus subset(std::span<const std::string> names) const;

 private:
  std::vector<ToolSpec> tools_;
  std::unordered_map<std::string, std::size_t> index_;
  std::string source_id_;
};

/// Parses the documented corpus document (a JSON array of tool objects).
ToolCorpus corpus_from_json(const Json& document, std::string source_id);
/// Reads and validates a corpus file. ParseError on malformed JSON,
/// ValidationError on schema violations.
ToolCorpus load_corpus(const std::filesystem::path& path);

Json to_json(const ToolSpec& tool);
Json to_json(const ToolCorpus& corpus);

/// How tools are rendered into context.
enum class RegistrationContextMode {
  Full,                // complete function declaration
  NameOnly,            // one name per line
  NamePlusDescription  // "name: description" per line
};
std::string_view to_string(RegistrationContextMode mode);
RegistrationContextMode mode_from_string(std::string_view text);

/// Function declaration JSON object: {"name", "description", "parameters"}.
Json declaration_json(const ToolSpec& tool);
/// Compact wire form of declaration_json.
std::string serialize_declaration(const ToolSpec& tool);
/// "[d1,d2,...]" of already-serialized declarations; "" when empty (no
/// functions field is sent at all).
std::string join_declarations(std::span<const std::string> declarations);

struct ComponentTokenBreakdown {
  TokenCount name_tokens{};
  TokenCount description_tokens{};
  TokenCount parameter_tokens{};
  TokenCount total_tokens{};
};

/// Tokens of each component as it appears inside the serialized declaration:
/// JSON-escaped string contents for name/description, compact JSON for the
/// parameter schema.
ComponentTokenBreakdown component_breakdown(const ToolSpec& tool, const TokenCounter& counter);

/// Tokens of the declaration's fixed JSON skeleton ({"name":"...","description":"...",
/// "parameters":...}) excluding component contents, under `counter`.
TokenCount declaration_framing_tokens(const TokenCounter& counter);

/// Serialized context for a subset of tools under `mode`. Throws UnknownTool.
std::string serialize_subset(std::span<const std::string> names, const ToolCorpus& corpus,
                             RegistrationContextMode mode);

TokenCount corpus_token_length(std::span<const std::string> names, const ToolCorpus& corpus,
                               RegistrationContextMode mode, const TokenCounter& counter);

/// Component totals summed over the corpus, plus the fraction each represents.
struct CorpusComponentShares {
  ComponentTokenBreakdown totals;
  double name_fraction{};
  double description_fraction{};
  double parameter_fraction{};
};
CorpusComponentShares component_shares(const ToolCorpus& corpus, const TokenCounter& counter);

}  // namespace ecoact
