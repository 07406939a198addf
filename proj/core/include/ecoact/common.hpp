// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace ecoact {

/// Insertion-ordered JSON. Every payload that goes on the wire is built with
/// this type so serialized bytes follow construction order.
using Json = nlohmann::ordered_json;

using TokenCount = std::uint64_t;

/// 64-bit FNV-1a. Used for stable corpus fingerprints and mock-executor keys;
/// not a cryptographic hash.
std::uint64_t fnv1a64(std::string_view bytes);

/// fnv1a64 rendered as 16 lowercase hex digits.
std::string fnv1a64_hex(std::string_view bytes);

/// Compact dump of `value` with object keys sorted recursively. Two argument
/// objects that differ only in key order produce the same text.
std::string canonical_dump(const Json& value);

}  // namespace ecoact
