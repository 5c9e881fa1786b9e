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
#include <string>

namespace ugsim {

std::string_view to_string(ResponderChoice choice) {
  return choice == ResponderChoice::kAccept ? "accept" : "reject";
}

PayoffPair payoff(const GameConfig& config, Offer offer,
                  ResponderChoice choice) {
  if (!config.valid()) throw std::domain_error("invalid game config");
  if (offer.coins_to_responder < 0 ||
      offer.coins_to_responder > config.total_good) {
    throw std::domain_error("offer " +
                            std::to_string(offer.coins_to_responder) +
                            " outside [0, " +
                            std::to_string(config.total_good) + "]");
  }
  if (choice == ResponderChoice::kReject) return {0, 0};
  return {config.total_good - offer.coins_to_responder,
          offer.coins_to_responder};
}

std::pair<Offer, ResponderChoice> equilibrium(const GameConfig&) {
  return {Offer{0}, ResponderChoice::kAccept};
}

double redeemed_value(const GameConfig& config, std::int64_t coins) {
  if (coins < 0) throw std::domain_error("negative coin count");
  return static_cast<double>(coins) * config.redemption_rate;
}

}  // namespace ugsim
