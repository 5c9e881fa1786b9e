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

#ifndef UGSIM_GAME_H_
#define UGSIM_GAME_H_

#include <cstdint>
#include <string_view>
#include <utility>

namespace ugsim {

// The divisible good and how coins convert to money at the end of the game.
struct GameConfig {
  int total_good = 100;         // coins
  double redemption_rate = 100;  // dollars per coin

  bool valid() const { return total_good > 0 && redemption_rate > 0; }
};

// Coins the proposer hands to the responder. The fraction of the good is
// coins_to_responder / total_good.
struct Offer {
  int coins_to_responder = 0;

  double fraction(const GameConfig& config) const {
    return static_cast<double>(coins_to_responder) / config.total_good;
  }
  friend bool operator==(const Offer&, const Offer&) = default;
};

enum class ResponderChoice { kAccept, kReject };

std::string_view to_string(ResponderChoice choice);

struct PayoffPair {
  int proposer_payoff = 0;
  int responder_payoff = 0;
  friend bool operator==(const PayoffPair&, const PayoffPair&) = default;
};

// Throws std::domain_error if the offer lies outside [0, total_good] or the
// config is invalid.
PayoffPair payoff(const GameConfig& config, Offer offer,
                  ResponderChoice choice);

// Subgame perfect equilibrium: offer nothing, and the responder accepts.
std::pair<Offer, ResponderChoice> equilibrium(const GameConfig& config);

// Money paid out for `coins` at the end of the experiment.
double redeemed_value(const GameConfig& config, std::int64_t coins);

}  // namespace ugsim

#endif  // UGSIM_GAME_H_
