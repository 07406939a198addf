// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string_view>

#include "ecoact/common.hpp"

namespace ecoact {

/// Deterministic text -> token count mapping. Implementations must be
/// stateless or internally synchronized; one counter is shared by every
/// concurrently running trace.
class TokenCounter {
 public:
  virtual ~TokenCounter() = default;
  virtual std::string_view id() const = 0;
  virtual TokenCount count(std::string_view text) const = 0;
};

/// The built-in approximate counter.
///
/// A token is either a maximal run of word bytes or a single punctuation
/// byte. Word bytes are ASCII letters, ASCII digits and every byte >= 0x80
/// (so multi-byte UTF-8 sequences join the surrounding word). Whitespace
/// separates tokens and is never counted. Everything else is punctuation,
/// including '_'.
///
///   "hello world"  -> 2
///   "get_weather"  -> 3   (get, _, weather)
///   "{\"a\":1}"    -> 7
class RuleTokenCounter final : public TokenCounter {
 public:
  std::string_view id() const override { return "rule-v1"; }
  TokenCount count(std::string_view text) const override;
};

const TokenCounter& default_counter();

/// Longest byte prefix of `text` whose token count is <= `limit`, cut on a
/// UTF-8 code point boundary. Relies on prefix counts being nondecreasing,
/// which holds for RuleTokenCounter.
std::size_t prefix_bytes_within(const TokenCounter& counter, std::string_view text,
                                TokenCount limit);

}  // namespace ecoact
