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

#include "ugsim/prompt.h"

#include "gtest/gtest.h"
#include "test_util.h"
#include "ugsim/errors.h"
#include "ugsim/strings.h"

namespace ugsim {
namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + 1)) {
    ++n;
  }
  return n;
}

const auto& proposer_ex() { return default_exemplars(Side::kProposer); }
const auto& responder_ex() { return default_exemplars(Side::kResponder); }

TEST(RenderPromptTest, ZeroShotHasNoExemplarBlock) {
  auto p = render_prompt(default_template(), PromptingMethod::kZeroShot, Side::kProposer,
                         {}, std::nullopt);
  EXPECT_EQ(p.text.find("Offer:"), std::string::npos);
  EXPECT_EQ(p.text.find("examples"), std::string::npos);
  EXPECT_FALSE(p.offer_shown.has_value());
}

TEST(RenderPromptTest, ZeroShotIgnoresExemplars) {
  auto bare = render_prompt(default_template(), PromptingMethod::kZeroShot,
                            Side::kResponder, {}, 40);
  auto with = render_prompt(default_template(), PromptingMethod::kZeroShot,
                            Side::kResponder, responder_ex(), 40);
  EXPECT_EQ(bare.text, with.text);
}

TEST(RenderPromptTest, FewShotResponderListsDecisionsWithoutReasons) {
  ASSERT_EQ(responder_ex().size(), 10u);
  auto p = render_prompt(default_template(), PromptingMethod::kFewShot, Side::kResponder,
                         responder_ex(), 30);
  EXPECT_NE(p.text.find("offers you 30 of the 100 coins"), std::string::npos);
  EXPECT_EQ(count(p.text, "\nOffer: "), 10u);
  EXPECT_EQ(count(p.text, " -> Decision: "), 10u);
  EXPECT_EQ(count(p.text, "Reason:"), 0u);
  EXPECT_NE(p.text.find("Offer: 10 -> Decision: reject"), std::string::npos);
  EXPECT_EQ(p.offer_shown, 30);
}

TEST(RenderPromptTest, ChainOfThoughtFollowsEachExemplarWithItsReason) {
  auto p = render_prompt(default_template(), PromptingMethod::kChainOfThought,
                         Side::kProposer, proposer_ex(), std::nullopt);
  auto lines = split(p.text, '\n');
  int exemplar_lines = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].starts_with("Offer: ")) {
      ++exemplar_lines;
      ASSERT_LT(i + 1, lines.size());
      EXPECT_TRUE(lines[i + 1].starts_with("Reason: ")) << lines[i + 1];
    }
  }
  EXPECT_EQ(exemplar_lines, 10);
}

TEST(RenderPromptTest, SectionsAppearInOrder) {
  PromptTemplate t = default_template();
  t.persona = "You are a 30-year-old teacher.";
  auto p = render_prompt(t, PromptingMethod::kFewShot, Side::kProposer, proposer_ex(),
                         std::nullopt);
  auto persona = p.text.find("You are a 30-year-old teacher.");
  auto game = p.text.find("ultimatum game");
  auto situation = p.text.find("You are the proposer");
  auto block = p.text.find("Offer: 50");
  auto format = p.text.find("End your answer");
  EXPECT_EQ(persona, 0u);
  EXPECT_LT(persona, game);
  EXPECT_LT(game, situation);
  EXPECT_LT(situation, block);
  EXPECT_LT(block, format);
}

TEST(RenderPromptTest, PersonaAbsentByDefault) {
  auto p = render_prompt(default_template(), PromptingMethod::kZeroShot, Side::kProposer,
                         {}, std::nullopt);
  EXPECT_TRUE(p.text.starts_with("You are taking part"));
}

TEST(RenderPromptTest, Errors) {
  const auto& t = default_template();
  EXPECT_THROW(render_prompt(t, PromptingMethod::kFewShot, Side::kProposer, {}, std::nullopt),
               PromptError);
  EXPECT_THROW(render_prompt(t, PromptingMethod::kChainOfThought, Side::kProposer, {},
                             std::nullopt),
               PromptError);
  std::vector<Exemplar> no_reason = {{Side::kProposer, 50, std::nullopt, std::nullopt}};
  EXPECT_THROW(render_prompt(t, PromptingMethod::kChainOfThought, Side::kProposer,
                             no_reason, std::nullopt),
               PromptError);
  EXPECT_NO_THROW(render_prompt(t, PromptingMethod::kFewShot, Side::kProposer, no_reason,
                                std::nullopt));
  EXPECT_THROW(render_prompt(t, PromptingMethod::kZeroShot, Side::kResponder, {},
                             std::nullopt),
               PromptError);
  EXPECT_THROW(render_prompt(t, PromptingMethod::kZeroShot, Side::kResponder, {}, 101),
               PromptError);
  EXPECT_THROW(render_prompt(t, PromptingMethod::kFewShot, Side::kResponder, proposer_ex(),
                             20),
               PromptError);

  PromptTemplate unfilled = t;
  unfilled.situation_proposer += " {offer}";
  EXPECT_THROW(render_prompt(unfilled, PromptingMethod::kZeroShot, Side::kProposer, {},
                             std::nullopt),
               PromptError);
}

TEST(RenderPromptTest, DeterministicAndAlwaysStatesStakes) {
  for (auto method : {PromptingMethod::kZeroShot, PromptingMethod::kFewShot,
                      PromptingMethod::kChainOfThought}) {
    for (auto side : {Side::kProposer, Side::kResponder}) {
      const auto& ex = side == Side::kProposer ? proposer_ex() : responder_ex();
      std::optional<int> offer;
      if (side == Side::kResponder) offer = 45;
      auto a = render_prompt(default_template(), method, side, ex, offer);
      auto b = render_prompt(default_template(), method, side, ex, offer);
      EXPECT_EQ(a.text, b.text);
      EXPECT_NE(a.text.find("100 coins"), std::string::npos);
      EXPECT_NE(a.text.find("redeemed to 100 dollars"), std::string::npos);
      std::string lower = to_lower(a.text);
      EXPECT_EQ(lower.find("maximize"), std::string::npos);
      EXPECT_EQ(lower.find("maximise"), std::string::npos);
      EXPECT_EQ(lower.find("profit"), std::string::npos);
    }
  }
}

TEST(ValidateTemplateTest, DefaultIsClean) {
  EXPECT_TRUE(validate_template(default_template()).empty());
}

TEST(ValidateTemplateTest, EmptyOutputFormat) {
  PromptTemplate t = default_template();
  t.output_format_proposer = "  ";
  EXPECT_EQ(validate_template(t).size(), 1u);
}

TEST(ValidateTemplateTest, MissingPlaceholder) {
  PromptTemplate t = default_template();
  t.situation_responder = "You are the responder.";
  EXPECT_EQ(validate_template(t).size(), 1u);
  t.situation_responder = "{offer} and {offer}";
  EXPECT_EQ(validate_template(t).size(), 1u);
}

TEST(TemplateFileTest, BundledFileMatchesDefault) {
  auto t = load_template(testing::source_path("templates/default.tmpl"));
  EXPECT_EQ(serialize_template(t), serialize_template(default_template()));
  EXPECT_FALSE(t.persona.has_value());
}

TEST(TemplateFileTest, ParsesSectionsAndPersona) {
  auto t = parse_template(
      "# comment\n[persona]\nYou are cautious.\n[game_explanation]\nLine one.\nLine two.\n"
      "[situation_proposer]\nP\n[situation_responder]\nR {offer}\n"
      "[output_format_proposer]\nOP\n[output_format_responder]\nOR\n",
      "t");
  EXPECT_EQ(t.persona, "You are cautious.");
  EXPECT_EQ(t.game_explanation, "Line one.\nLine two.");
  EXPECT_TRUE(validate_template(t).empty());
  EXPECT_THROW(parse_template("[nonsense]\nx\n", "t"), LoadError);
  EXPECT_THROW(parse_template("stray text\n", "t"), LoadError);
}

TEST(ExemplarFileTest, LoadsRationaleWithCommas) {
  testing::TempDir dir;
  testing::write_file(dir / "ex.csv",
                      "side,offer,decision,rationale\n"
                      "proposer,50,,Fair, and safe.\n"
                      "responder,10,reject,Too low.\n");
  auto ex = load_exemplars(dir / "ex.csv");
  ASSERT_EQ(ex.size(), 2u);
  EXPECT_EQ(ex[0].rationale, "Fair, and safe.");
  EXPECT_EQ(ex[1].decision, ResponderChoice::kReject);
  testing::write_file(dir / "bad.csv", "side,offer,decision,rationale\nresponder,10,,x\n");
  EXPECT_THROW(load_exemplars(dir / "bad.csv"), LoadError);
}

TEST(PromptHashTest, ChangesWithTemplateOrExemplars) {
  auto base = prompt_hash(default_template(), proposer_ex(), responder_ex());
  EXPECT_EQ(base.size(), 16u);
  EXPECT_EQ(base, prompt_hash(default_template(), proposer_ex(), responder_ex()));
  PromptTemplate t = default_template();
  t.game_explanation += " ";
  EXPECT_NE(base, prompt_hash(t, proposer_ex(), responder_ex()));
  auto fewer = proposer_ex();
  fewer.pop_back();
  EXPECT_NE(base, prompt_hash(default_template(), fewer, responder_ex()));
}

}  // namespace
}  // namespace ugsim
