// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

namespace ecoact::prompts {

/// System prompt for lazy registration. Tools must be registered through
/// tool_register before they are called.
extern const std::string_view kEcoActSystem;
/// System prompt for the eager baseline where every tool is declared.
extern const std::string_view kEagerSystem;

/// Judge templates. {query} and {answer} (or {task}) are substituted.
extern const std::string_view kCheckAnswerStatus;
extern const std::string_view kParseAnswerStatus;
extern const std::string_view kCheckTaskSolvable;

/// Fixed observation texts.
extern const std::string_view kFinishObservation;
extern const std::string_view kGiveUpObservation;

/// Answer text substituted for traces that did not produce a final answer.
extern const std::string_view kNoAnswerMarker;

/// Replaces every "{key}" in `tmpl` with `value`.
std::string fill(std::string_view tmpl, std::string_view key, std::string_view value);

}  // namespace ecoact::prompts
