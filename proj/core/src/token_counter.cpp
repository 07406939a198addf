// SPDX-License-Identifier: Apache-2.0
#include "ecoact/token_counter.hpp"

namespace ecoact {
namespace {

enum class ByteClass { Space, Word, Punct };

constexpr ByteClass classify(unsigned char c) {
  if (c >= 0x80) return ByteClass::Word;
  if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9')) {
    return ByteClass::Word;
  }
  if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
    return ByteClass::Space;
  }
  return ByteClass::Punct;
}

}  // namespace

TokenCount RuleTokenCounter::count(std::string_view text) const {
  TokenCount tokens = 0;
  bool in_word = false;
  for (unsigned char c : text) {
    switch (classify(c)) {
      case ByteClass::Word:
        if (!in_word) ++tokens;
        in_word = true;
        break;
      case ByteClass::Punct:
        ++tokens;
        in_word = false;
        break;
      case ByteClass::Space:
        in_word = false;
        break;
    }
  }
  return tokens;
}

const TokenCounter& default_counter() {
  static const RuleTokenCounter counter;
  return counter;
}

std::size_t prefix_bytes_within(const TokenCounter& counter, std::string_view text,
                                TokenCount limit) {
  if (counter.count(text) <= limit) return text.size();
  std::size_t lo = 0;
  std::size_t hi = text.size();
  // Invariant: count(text[0, lo)) <= limit < count(text[0, hi)).
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (counter.count(text.substr(0, mid)) <= limit) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  while (lo > 0 && (static_cast<unsigned char>(text[lo]) & 0xC0) == 0x80) --lo;
  return lo;
}

}  // namespace ecoact
