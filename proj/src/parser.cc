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

#include "ugsim/parser.h"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "ugsim/errors.h"
#include "ugsim/strings.h"

namespace ugsim {
namespace {

using nlohmann::json;

constexpr std::size_t kOfferWindow = 40;

bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

// A brace-delimited span. `closed` is false when the text ends first.
struct Fragment {
  std::size_t begin = 0;
  std::size_t end = 0;  // one past the closing brace
  bool closed = false;
};

std::vector<Fragment> find_fragments(std::string_view text) {
  std::vector<Fragment> out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '{') continue;
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    Fragment f{i, text.size(), false};
    for (std::size_t j = i; j < text.size(); ++j) {
      char c = text[j];
      if (in_string) {
        if (escaped) {
          escaped = false;
        } else if (c == '\\') {
          escaped = true;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == '{') {
        ++depth;
      } else if (c == '}') {
        if (--depth == 0) {
          f.end = j + 1;
          f.closed = true;
          break;
        }
      }
    }
    out.push_back(f);
  }
  return out;
}

std::size_t line_of(std::string_view text, std::size_t pos) {
  return static_cast<std::size_t>(
      std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n'));
}

std::string excerpt_of(std::string_view text) {
  return std::string(text.substr(0, kMaxExcerpt));
}

std::string tail_excerpt(std::string_view text) {
  if (text.size() <= kMaxExcerpt) return std::string(text);
  return std::string(text.substr(text.size() - kMaxExcerpt));
}

template <typename Value>
struct Candidate {
  Value value;
  Fragment fragment;
};

// Scans every brace fragment. `extract` returns the candidate value for a
// parsed object, std::nullopt if the object does not carry the key, or sets
// `malformed` when the key is present with an unusable value.
template <typename Value, typename Extract>
std::vector<Candidate<Value>> structured_candidates(std::string_view text,
                                                   std::string_view key,
                                                   Extract extract,
                                                   bool& malformed) {
  std::vector<Candidate<Value>> out;
  for (const Fragment& f : find_fragments(text)) {
    std::string_view body = text.substr(f.begin, f.end - f.begin);
    bool mentions_key = to_lower(body).find(key) != std::string::npos;
    if (!f.closed) {
      malformed = malformed || mentions_key;
      continue;
    }
    json parsed = json::parse(body.begin(), body.end(), nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object()) {
      malformed = malformed || mentions_key;
      continue;
    }
    auto it = parsed.find(std::string(key));
    if (it == parsed.end()) continue;
    std::optional<Value> v = extract(*it);
    if (!v) {
      malformed = true;
      continue;
    }
    out.push_back({*v, f});
  }
  return out;
}

template <typename Value>
bool ambiguous_on_last_line(std::string_view text,
                            const std::vector<Candidate<Value>>& cands) {
  const auto& last = cands.back();
  std::size_t line = line_of(text, last.fragment.begin);
  for (std::size_t i = 0; i + 1 < cands.size(); ++i) {
    if (line_of(text, cands[i].fragment.begin) == line &&
        !(cands[i].value == last.value)) {
      return true;
    }
  }
  return false;
}

// Offer values wider than int are kept as int64 so range checks stay exact.
using OfferValue = std::int64_t;

std::optional<OfferValue> extract_offer(const json& v) {
  if (v.is_number_unsigned()) {
    auto u = v.get<std::uint64_t>();
    return static_cast<OfferValue>(std::min<std::uint64_t>(u, INT64_MAX));
  }
  if (v.is_number_integer()) return v.get<std::int64_t>();
  return std::nullopt;
}

struct IntegerToken {
  std::size_t begin;  // including a leading minus sign
  OfferValue value;
};

std::vector<IntegerToken> standalone_integers(std::string_view text) {
  std::vector<IntegerToken> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_digit(text[i])) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < text.size() && is_digit(text[i])) ++i;
    std::size_t stop = i;
    bool glued_before =
        start > 0 && (is_alpha(text[start - 1]) || text[start - 1] == '.' ||
                      text[start - 1] == '_');
    bool glued_after =
        stop < text.size() &&
        (is_alpha(text[stop]) || text[stop] == '_' ||
         (text[stop] == '.' && stop + 1 < text.size() && is_digit(text[stop + 1])));
    if (glued_before || glued_after) continue;
    bool negative = start > 0 && text[start - 1] == '-' &&
                    (start < 2 || !std::isalnum(static_cast<unsigned char>(text[start - 2])));
    OfferValue magnitude = 0;
    for (std::size_t k = start; k < stop; ++k) {
      if (magnitude > (INT64_MAX - 9) / 10) {
        magnitude = INT64_MAX;
        break;
      }
      magnitude = magnitude * 10 + (text[k] - '0');
    }
    out.push_back({negative ? start - 1 : start, negative ? -magnitude : magnitude});
  }
  return out;
}

std::optional<OfferValue> fallback_offer(std::string_view text) {
  std::string lower = to_lower(text);
  std::vector<std::size_t> keyword_ends;
  for (std::size_t pos = lower.find("offer"); pos != std::string::npos;
       pos = lower.find("offer", pos + 1)) {
    if (pos > 0 && is_alpha(lower[pos - 1])) continue;
    keyword_ends.push_back(pos + 5);
  }
  auto tokens = standalone_integers(text);
  for (auto it = tokens.rbegin(); it != tokens.rend(); ++it) {
    for (std::size_t end : keyword_ends) {
      if (end <= it->begin && it->begin - end <= kOfferWindow) return it->value;
    }
  }
  return std::nullopt;
}

std::optional<ResponderChoice> extract_choice(const json& v) {
  if (!v.is_string()) return std::nullopt;
  std::string s = to_lower(trim(v.get<std::string>()));
  if (s == "accept") return ResponderChoice::kAccept;
  if (s == "reject") return ResponderChoice::kReject;
  return std::nullopt;
}

std::string_view final_sentence(std::string_view text) {
  std::string_view last;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '.' || text[i] == '!' || text[i] == '?' ||
        text[i] == '\n') {
      std::string_view piece = text.substr(start, i - start);
      if (std::any_of(piece.begin(), piece.end(), is_alpha)) last = piece;
      start = i + 1;
    }
  }
  return last;
}

}  // namespace

std::string_view to_string(ExtractionMode mode) {
  return mode == ExtractionMode::kStructured ? "Structured" : "Fallback";
}

std::string_view to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::kNoValue:
      return "NoValue";
    case ParseErrorKind::kOutOfRange:
      return "OutOfRange";
    case ParseErrorKind::kAmbiguous:
      return "Ambiguous";
    case ParseErrorKind::kMalformedStructure:
      return "MalformedStructure";
  }
  return "NoValue";
}

ExtractionMode parse_extraction_mode(std::string_view text) {
  if (text == "Structured") return ExtractionMode::kStructured;
  if (text == "Fallback") return ExtractionMode::kFallback;
  throw ConfigError("unknown extraction mode '" + std::string(text) + "'");
}

ParseErrorKind parse_error_kind(std::string_view text) {
  for (auto k : {ParseErrorKind::kNoValue, ParseErrorKind::kOutOfRange,
                 ParseErrorKind::kAmbiguous, ParseErrorKind::kMalformedStructure}) {
    if (to_string(k) == text) return k;
  }
  throw ConfigError("unknown parse error kind '" + std::string(text) + "'");
}

ParseResult parse_proposer(std::string_view raw, int total_good) {
  bool malformed = false;
  auto cands = structured_candidates<OfferValue>(raw, "offer", extract_offer,
                                                 malformed);
  if (!cands.empty()) {
    const auto& last = cands.back();
    std::string_view body =
        raw.substr(last.fragment.begin, last.fragment.end - last.fragment.begin);
    if (ambiguous_on_last_line(raw, cands)) {
      return ParseError{ParseErrorKind::kAmbiguous, excerpt_of(body)};
    }
    if (last.value < 0 || last.value > total_good) {
      return ParseError{ParseErrorKind::kOutOfRange, excerpt_of(body)};
    }
    return ParsedDecision{Side::kProposer, static_cast<int>(last.value),
                          std::nullopt, ExtractionMode::kStructured};
  }
  if (auto value = fallback_offer(raw)) {
    if (*value < 0 || *value > total_good) {
      return ParseError{ParseErrorKind::kOutOfRange, tail_excerpt(raw)};
    }
    return ParsedDecision{Side::kProposer, static_cast<int>(*value), std::nullopt,
                          ExtractionMode::kFallback};
  }
  return ParseError{malformed ? ParseErrorKind::kMalformedStructure
                              : ParseErrorKind::kNoValue,
                    tail_excerpt(raw)};
}

ParseResult parse_responder(std::string_view raw) {
  bool malformed = false;
  auto cands = structured_candidates<ResponderChoice>(raw, "decision",
                                                      extract_choice, malformed);
  if (!cands.empty()) {
    const auto& last = cands.back();
    if (ambiguous_on_last_line(raw, cands)) {
      return ParseError{ParseErrorKind::kAmbiguous,
                        excerpt_of(raw.substr(last.fragment.begin,
                                              last.fragment.end - last.fragment.begin))};
    }
    return ParsedDecision{Side::kResponder, std::nullopt, last.value,
                          ExtractionMode::kStructured};
  }

  std::string_view sentence = final_sentence(raw);
  bool saw_accept = false;
  bool saw_reject = false;
  std::size_t i = 0;
  while (i < sentence.size()) {
    if (!is_alpha(sentence[i])) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < sentence.size() && is_alpha(sentence[i])) ++i;
    std::string word = to_lower(sentence.substr(start, i - start));
    if (word == "accept" || word == "accepts" || word == "accepted") saw_accept = true;
    if (word == "reject" || word == "rejects" || word == "rejected") saw_reject = true;
  }
  if (saw_accept && saw_reject) {
    return ParseError{ParseErrorKind::kAmbiguous, excerpt_of(trim(sentence))};
  }
  if (saw_accept || saw_reject) {
    return ParsedDecision{Side::kResponder, std::nullopt,
                          saw_accept ? ResponderChoice::kAccept
                                     : ResponderChoice::kReject,
                          ExtractionMode::kFallback};
  }
  return ParseError{malformed ? ParseErrorKind::kMalformedStructure
                              : ParseErrorKind::kNoValue,
                    tail_excerpt(raw)};
}

ParseResult parse_decision(Side side, std::string_view raw, int total_good) {
  return side == Side::kProposer ? parse_proposer(raw, total_good)
                                 : parse_responder(raw);
}

}  // namespace ugsim
