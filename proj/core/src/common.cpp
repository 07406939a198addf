// SPDX-License-Identifier: Apache-2.0
#include "ecoact/common.hpp"

#include <fmt/format.h>

namespace ecoact {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string fnv1a64_hex(std::string_view bytes) { return fmt::format("{:016x}", fnv1a64(bytes)); }

std::string canonical_dump(const Json& value) {
  // nlohmann::json (std::map-backed) sorts keys on conversion.
  return nlohmann::json::parse(value.dump()).dump();
}

}  // namespace ecoact
