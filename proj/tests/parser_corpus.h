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

#ifndef UGSIM_TESTS_PARSER_CORPUS_H_
#define UGSIM_TESTS_PARSER_CORPUS_H_

// Handwritten fallback and error texts with the result each must produce.

#include <optional>
#include <string>
#include <vector>

#include "ugsim/parser.h"

namespace ugsim::testing {

struct CorpusCase {
  Side side;
  std::string text;
  // Set for a successful parse; otherwise `error` holds the expected kind.
  std::optional<int> offer;
  std::optional<ResponderChoice> choice;
  ExtractionMode mode = ExtractionMode::kFallback;
  std::optional<ParseErrorKind> error;
};

inline CorpusCase offer_case(std::string text, int offer, ExtractionMode mode) {
  return {Side::kProposer, std::move(text), offer, std::nullopt, mode, std::nullopt};
}
inline CorpusCase choice_case(std::string text, ResponderChoice c, ExtractionMode mode) {
  return {Side::kResponder, std::move(text), std::nullopt, c, mode, std::nullopt};
}
inline CorpusCase error_case(Side side, std::string text, ParseErrorKind kind) {
  return {side, std::move(text), std::nullopt, std::nullopt, ExtractionMode::kFallback,
          kind};
}

inline std::vector<CorpusCase> parser_corpus() {
  using enum ExtractionMode;
  using enum ParseErrorKind;
  constexpr auto P = Side::kProposer;
  constexpr auto R = Side::kResponder;
  constexpr auto A = ResponderChoice::kAccept;
  constexpr auto X = ResponderChoice::kReject;
  return {
      offer_case("I will offer 40 coins to the other player.", 40, kFallback),
      offer_case("Offer: 35", 35, kFallback),
      offer_case("Last round I offered 25 coins and it went fine.", 25, kFallback),
      offer_case("{\"Offer\": 40}", 40, kFallback),
      offer_case("{\"offer\": 50", 50, kFallback),
      offer_case("Thinking it over.\n{\"offer\": 30}\nFinal answer: {\"offer\": 45}", 45,
                 kStructured),
      offer_case("{\"offer\": 30} and again {\"offer\": 30}", 30, kStructured),
      offer_case("{\"offer\": 40} though my offer could be 60", 40, kStructured),
      offer_case("{\"reason\": \"an even split\", \"offer\": 50}", 50, kStructured),
      error_case(P, "{\"offer\": 150}", kOutOfRange),
      error_case(P, "{\"offer\": -5}", kOutOfRange),
      error_case(P, "My offer is -5 coins.", kOutOfRange),
      error_case(P, "I offer 120 coins.", kOutOfRange),
      error_case(P, "{\"offer\": 30} {\"offer\": 45}", kAmbiguous),
      error_case(P, "I think splitting evenly is fair.", kNoValue),
      error_case(P, "I keep 70 and give 30.", kNoValue),
      error_case(P, "offer: 1e2", kNoValue),
      error_case(P, "", kNoValue),
      error_case(P, "{\"offer\": \"fifty\"}", kMalformedStructure),
      error_case(P, "{\"offer\": 50.5}", kMalformedStructure),
      error_case(P, "{offer: fifty}", kMalformedStructure),
      choice_case("Unfair. I reject this offer.", X, kFallback),
      choice_case("I rejected offers like this before. This time I accept.", A, kFallback),
      choice_case("Accepted!", A, kFallback),
      choice_case("{\"decision\": \"reject\"}\n{\"decision\": \"ACCEPT\"}", A, kStructured),
      choice_case("{\"decision\": \"accept\"} Honestly I would reject.", A, kStructured),
      error_case(R, "I would reject it normally, but I accept.", kAmbiguous),
      error_case(R, "{\"decision\": \"reject\"} {\"decision\": \"accept\"}", kAmbiguous),
      error_case(R, "Acceptable terms, I suppose.", kNoValue),
      error_case(R, "{\"decision\": \"maybe\"}", kMalformedStructure),
  };
}

}  // namespace ugsim::testing

#endif  // UGSIM_TESTS_PARSER_CORPUS_H_
