// Copyright 2026 The ugsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef UGSIM_PARSER_H_
#define UGSIM_PARSER_H_

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "ugsim/game.h"
#include "ugsim/prompt.h"

namespace ugsim {

enum class ExtractionMode { kStructured, kFallback };
enum class ParseErrorKind { kNoValue, kOutOfRange, kAmbiguous, kMalformedStructure };

std::string_view to_string(ExtractionMode mode);
std::string_view to_string(ParseErrorKind kind);
ExtractionMode parse_extraction_mode(std::string_view text);
ParseErrorKind parse_error_kind(std::string_view text);

struct ParsedDecision {
  Side side = Side::kProposer;
  std::optional<int> offer;                // proposer
  std::optional<ResponderChoice> choice;   // responder
  ExtractionMode extraction_mode = ExtractionMode::kStructured;
  friend bool operator==(const ParsedDecision&, const ParsedDecision&) = default;
};

inline constexpr std::size_t kMaxExcerpt = 200;

struct ParseError {
  ParseErrorKind kind = ParseErrorKind::kNoValue;
  std::string excerpt;  // at most kMaxExcerpt bytes
  friend bool operator==(const ParseError&, const ParseError&) = default;
};

using ParseResult = std::variant<ParsedDecision, ParseError>;

// Structured: the last JSON object with an integer "offer". Fallback, only
// when no such object exists: the last standalone integer that starts within
// 40 characters after the word "offer" (case-insensitive). The value must lie
// in [0, total_good]. Two structured candidates with different values on the
// line of the last one are Ambiguous.
ParseResult parse_proposer(std::string_view raw, int total_good = 100);

// Structured: the last JSON object whose "decision" is "accept" or "reject"
// (case-insensitive). Fallback: accept/reject or their inflections in the
// final sentence; both present is Ambiguous.
ParseResult parse_responder(std::string_view raw);

ParseResult parse_decision(Side side, std::string_view raw, int total_good = 100);

}  // namespace ugsim

#endif  // UGSIM_PARSER_H_
