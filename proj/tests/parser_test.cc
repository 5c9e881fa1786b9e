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

#include <random>

#include "gtest/gtest.h"
#include "parser_corpus.h"
#include "ugsim/backend.h"

namespace ugsim {
namespace {

ParsedDecision ok(const ParseResult& r) {
  EXPECT_TRUE(std::holds_alternative<ParsedDecision>(r));
  return std::holds_alternative<ParsedDecision>(r) ? std::get<ParsedDecision>(r)
                                                   : ParsedDecision{};
}

ParseErrorKind err(const ParseResult& r) {
  EXPECT_TRUE(std::holds_alternative<ParseError>(r));
  return std::holds_alternative<ParseError>(r) ? std::get<ParseError>(r).kind
                                               : ParseErrorKind::kNoValue;
}

TEST(ParseProposerTest, StructuredAtEnd) {
  auto d = ok(parse_proposer("I think fairness matters ... {\"offer\": 50}"));
  EXPECT_EQ(d.offer, 50);
  EXPECT_EQ(d.side, Side::kProposer);
  EXPECT_FALSE(d.choice.has_value());
  EXPECT_EQ(d.extraction_mode, ExtractionMode::kStructured);
}

TEST(ParseProposerTest, Fallback) {
  auto d = ok(parse_proposer("I will offer 40 coins to the other player."));
  EXPECT_EQ(d.offer, 40);
  EXPECT_EQ(d.extraction_mode, ExtractionMode::kFallback);
}

TEST(ParseProposerTest, OutOfRange) {
  EXPECT_EQ(err(parse_proposer("{\"offer\": 150}")), ParseErrorKind::kOutOfRange);
}

TEST(ParseProposerTest, RangeFollowsTotalGood) {
  EXPECT_EQ(ok(parse_proposer("{\"offer\": 150}", 200)).offer, 150);
  EXPECT_EQ(err(parse_proposer("{\"offer\": 11}", 10)), ParseErrorKind::kOutOfRange);
}

TEST(ParseProposerTest, FallbackWindowIsFortyCharacters) {
  std::string near = "offer" + std::string(40, ' ') + "12";
  std::string far = "offer" + std::string(41, ' ') + "12";
  EXPECT_EQ(ok(parse_proposer(near)).offer, 12);
  EXPECT_EQ(err(parse_proposer(far)), ParseErrorKind::kNoValue);
}

TEST(ParseProposerTest, HugeNumbersAreOutOfRangeNotOverflow) {
  EXPECT_EQ(err(parse_proposer("{\"offer\": 99999999999999999999999}")),
            ParseErrorKind::kOutOfRange);
  EXPECT_EQ(err(parse_proposer("offer 99999999999999999999999")),
            ParseErrorKind::kOutOfRange);
}

TEST(ParseResponderTest, Examples) {
  auto a = ok(parse_responder("{\"decision\": \"accept\"}"));
  EXPECT_EQ(a.choice, ResponderChoice::kAccept);
  EXPECT_EQ(a.extraction_mode, ExtractionMode::kStructured);
  EXPECT_FALSE(a.offer.has_value());

  auto r = ok(parse_responder("Unfair. I reject this offer."));
  EXPECT_EQ(r.choice, ResponderChoice::kReject);
  EXPECT_EQ(r.extraction_mode, ExtractionMode::kFallback);

  EXPECT_EQ(err(parse_responder("I would reject it normally, but I accept.")),
            ParseErrorKind::kAmbiguous);
}

TEST(ParseDecisionTest, DispatchesOnSide) {
  EXPECT_EQ(ok(parse_decision(Side::kProposer, "{\"offer\": 3}")).offer, 3);
  EXPECT_EQ(ok(parse_decision(Side::kResponder, "{\"decision\": \"reject\"}")).choice,
            ResponderChoice::kReject);
}

TEST(ParserCorpusTest, EveryCaseMatches) {
  auto corpus = testing::parser_corpus();
  ASSERT_EQ(corpus.size(), 30u);
  for (const auto& c : corpus) {
    SCOPED_TRACE(c.text);
    auto result = parse_decision(c.side, c.text);
    if (c.error) {
      ASSERT_TRUE(std::holds_alternative<ParseError>(result));
      EXPECT_EQ(std::get<ParseError>(result).kind, *c.error);
    } else {
      ASSERT_TRUE(std::holds_alternative<ParsedDecision>(result));
      const auto& d = std::get<ParsedDecision>(result);
      EXPECT_EQ(d.offer, c.offer);
      EXPECT_EQ(d.choice, c.choice);
      EXPECT_EQ(d.extraction_mode, c.mode);
    }
  }
}

TEST(ParserTest, ExcerptIsBounded) {
  std::string text(5000, 'x');
  auto e = std::get<ParseError>(parse_proposer(text));
  EXPECT_LE(e.excerpt.size(), kMaxExcerpt);
  std::string big = "{\"offer\": 500, \"pad\": \"" + std::string(1000, 'y') + "\"}";
  EXPECT_LE(std::get<ParseError>(parse_proposer(big)).excerpt.size(), kMaxExcerpt);
}

TEST(ParserTest, MockOutputsRoundTrip) {
  for (int offer = 0; offer <= 100; ++offer) {
    auto d = ok(parse_proposer(mock_proposer_text(offer)));
    EXPECT_EQ(d.offer, offer);
    EXPECT_EQ(d.extraction_mode, ExtractionMode::kStructured);
  }
  for (auto c : {ResponderChoice::kAccept, ResponderChoice::kReject}) {
    auto d = ok(parse_responder(mock_responder_text(c)));
    EXPECT_EQ(d.choice, c);
    EXPECT_EQ(d.extraction_mode, ExtractionMode::kStructured);
  }
}

TEST(ParserTest, RandomBytesNeverCrash) {
  std::mt19937_64 gen(12345);
  std::uniform_int_distribution<int> len(0, 64);
  std::uniform_int_distribution<int> byte(0, 255);
  const std::string alphabet = "{}\":offerdecisionacceptreject0123456789 .-\n";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  for (int i = 0; i < 100000; ++i) {
    std::string s(static_cast<std::size_t>(len(gen)), '\0');
    bool biased = i % 2 == 0;
    for (auto& ch : s) ch = static_cast<char>(biased ? alphabet[pick(gen)] : byte(gen));
    for (auto side : {Side::kProposer, Side::kResponder}) {
      auto r = parse_decision(side, s);
      if (auto* e = std::get_if<ParseError>(&r)) {
        ASSERT_LE(e->excerpt.size(), kMaxExcerpt);
      } else {
        const auto& d = std::get<ParsedDecision>(r);
        ASSERT_EQ(d.offer.has_value(), side == Side::kProposer);
        if (d.offer) ASSERT_TRUE(*d.offer >= 0 && *d.offer <= 100);
      }
    }
  }
}

}  // namespace
}  // namespace ugsim
