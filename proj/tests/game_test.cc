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

#include "ugsim/game.h"

#include <stdexcept>

#include "gtest/gtest.h"

namespace ugsim {
namespace {

const GameConfig kGame{100, 100};

TEST(PayoffTest, AcceptSplitsTheGood) {
  EXPECT_EQ(payoff(kGame, Offer{30}, ResponderChoice::kAccept), (PayoffPair{70, 30}));
  EXPECT_EQ(payoff(kGame, Offer{0}, ResponderChoice::kAccept), (PayoffPair{100, 0}));
}

TEST(PayoffTest, RejectZeroesBoth) {
  EXPECT_EQ(payoff(kGame, Offer{55}, ResponderChoice::kReject), (PayoffPair{0, 0}));
}

TEST(PayoffTest, OutOfRangeOfferIsDomainError) {
  EXPECT_THROW(payoff(kGame, Offer{101}, ResponderChoice::kAccept), std::domain_error);
  EXPECT_THROW(payoff(kGame, Offer{-1}, ResponderChoice::kReject), std::domain_error);
  EXPECT_THROW(payoff(GameConfig{0, 100}, Offer{0}, ResponderChoice::kAccept),
               std::domain_error);
}

TEST(PayoffTest, ExhaustiveSumsAndWeakDominance) {
  for (int offer = 0; offer <= 100; ++offer) {
    auto acc = payoff(kGame, Offer{offer}, ResponderChoice::kAccept);
    auto rej = payoff(kGame, Offer{offer}, ResponderChoice::kReject);
    EXPECT_EQ(acc.proposer_payoff + acc.responder_payoff, 100);
    EXPECT_EQ(rej.proposer_payoff + rej.responder_payoff, 0);
    EXPECT_GE(acc.responder_payoff, rej.responder_payoff);
    EXPECT_EQ(acc.responder_payoff == rej.responder_payoff, offer == 0) << offer;
    EXPECT_EQ(acc, payoff(kGame, Offer{offer}, ResponderChoice::kAccept));
  }
}

TEST(EquilibriumTest, OfferNothingAndAccept) {
  for (int r : {100, 10}) {
    auto [offer, choice] = equilibrium(GameConfig{r, 100});
    EXPECT_EQ(offer.coins_to_responder, 0);
    EXPECT_EQ(choice, ResponderChoice::kAccept);
    EXPECT_EQ(payoff(GameConfig{r, 100}, offer, choice), (PayoffPair{r, 0}));
  }
}

TEST(RedeemedValueTest, CoinsTimesRate) {
  EXPECT_DOUBLE_EQ(redeemed_value(kGame, 30), 3000);
  EXPECT_DOUBLE_EQ(redeemed_value(kGame, 0), 0);
  EXPECT_DOUBLE_EQ(redeemed_value(kGame, 100), 10000);
  EXPECT_THROW(redeemed_value(kGame, -1), std::domain_error);
}

TEST(OfferTest, FractionOfTheGood) {
  EXPECT_DOUBLE_EQ(Offer{25}.fraction(kGame), 0.25);
}

}  // namespace
}  // namespace ugsim
