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

#include <algorithm>
#include <cstdlib>
#include <map>
#include <string>

#include "ugsim/backend.h"
#include "ugsim/errors.h"
#include "ugsim/random.h"

namespace ugsim {
namespace {

class EquilibriumAgent : public Agent {
 public:
  AgentResponse complete(const RenderedPrompt& prompt,
                         const CallContext&) override {
    if (prompt.side == Side::kProposer) {
      return {mock_proposer_text(0), 0, 1, label()};
    }
    return {mock_responder_text(ResponderChoice::kAccept), 0, 1, label()};
  }
  std::string label() const override { return "mock:equilibrium"; }
};

class EmpiricalSamplerAgent : public Agent {
 public:
  explicit EmpiricalSamplerAgent(const MockSpec& spec)
      : seed_(spec.seed), offers_(spec.reference->proposer_offers()) {
    std::map<int, std::pair<int, int>> tally;
    for (const auto& s : spec.reference->responder_samples) {
      auto& [accepted, total] = tally[s.offer];
      accepted += s.accepted ? 1 : 0;
      ++total;
    }
    for (const auto& [offer, at] : tally) {
      acceptance_.emplace_back(offer,
                               static_cast<double>(at.first) / at.second);
    }
  }

  AgentResponse complete(const RenderedPrompt& prompt,
                         const CallContext& ctx) override {
    Rng rng(derive_seed(seed_, {ctx.stream_key,
                                static_cast<std::uint64_t>(ctx.agent_index),
                                static_cast<std::uint64_t>(ctx.attempt)}));
    if (prompt.side == Side::kProposer) {
      int offer = offers_[rng.uniform_index(offers_.size())];
      return {mock_proposer_text(offer), 0, 1, label()};
    }
    bool accept = rng.bernoulli(acceptance_at(prompt.offer_shown.value_or(0)));
    return {mock_responder_text(accept ? ResponderChoice::kAccept
                                       : ResponderChoice::kReject),
            0, 1, label()};
  }

  std::string label() const override { return "mock:empirical"; }

 private:
  // Rate at the nearest observed offer; ties go to the lower offer.
  double acceptance_at(int offer) const {
    const std::pair<int, double>* best = nullptr;
    for (const auto& entry : acceptance_) {
      if (best == nullptr ||
          std::abs(entry.first - offer) < std::abs(best->first - offer)) {
        best = &entry;
      }
    }
    return best->second;
  }

  std::uint64_t seed_;
  std::vector<int> offers_;
  std::vector<std::pair<int, double>> acceptance_;
};

class ThresholdAgent : public Agent {
 public:
  explicit ThresholdAgent(int threshold) : threshold_(threshold) {}

  AgentResponse complete(const RenderedPrompt& prompt,
                         const CallContext&) override {
    if (prompt.side == Side::kProposer) {
      // Smallest offer this responder type would take.
      return {mock_proposer_text(std::min(threshold_ + 1, kMaxOffer)), 0, 1,
              label()};
    }
    bool accept = prompt.offer_shown.value_or(0) > threshold_;
    return {mock_responder_text(accept ? ResponderChoice::kAccept
                                       : ResponderChoice::kReject),
            0, 1, label()};
  }
  std::string label() const override {
    return "mock:threshold=" + std::to_string(threshold_);
  }

 private:
  int threshold_;
};

class ScriptedAgent : public Agent {
 public:
  explicit ScriptedAgent(std::vector<std::string> script)
      : script_(std::move(script)) {}

  AgentResponse complete(const RenderedPrompt&,
                         const CallContext& ctx) override {
    std::size_t i = static_cast<std::size_t>(ctx.agent_index + ctx.attempt) %
                    script_.size();
    return {script_[i], 0, 1, label()};
  }
  std::string label() const override { return "mock:scripted"; }

 private:
  std::vector<std::string> script_;
};

}  // namespace

std::string_view to_string(MockKind kind) {
  switch (kind) {
    case MockKind::kEquilibrium:
      return "equilibrium";
    case MockKind::kEmpiricalSampler:
      return "empirical";
    case MockKind::kThresholdResponder:
      return "threshold";
    case MockKind::kScripted:
      return "scripted";
  }
  return "equilibrium";
}

std::string mock_proposer_text(int offer) {
  return "I have considered how the responder is likely to react.\n"
         "{\"offer\": " + std::to_string(offer) + "}";
}

std::string mock_responder_text(ResponderChoice choice) {
  return "I have weighed the offer against receiving nothing.\n"
         "{\"decision\": \"" + std::string(to_string(choice)) + "\"}";
}

std::unique_ptr<Agent> make_mock_agent(const MockSpec& spec) {
  switch (spec.kind) {
    case MockKind::kEquilibrium:
      return std::make_unique<EquilibriumAgent>();
    case MockKind::kEmpiricalSampler:
      if (!spec.reference || spec.reference->proposer_samples.empty() ||
          spec.reference->responder_samples.empty()) {
        throw ConfigError(
            "empirical mock needs a reference dataset with both sides");
      }
      return std::make_unique<EmpiricalSamplerAgent>(spec);
    case MockKind::kThresholdResponder:
      if (spec.threshold < 0 || spec.threshold > kMaxOffer) {
        throw ConfigError("threshold mock needs a threshold in [0, 100]");
      }
      return std::make_unique<ThresholdAgent>(spec.threshold);
    case MockKind::kScripted:
      if (spec.script.empty()) {
        throw ConfigError("scripted mock needs at least one response");
      }
      return std::make_unique<ScriptedAgent>(spec.script);
  }
  throw ConfigError("unknown mock kind");
}

std::unique_ptr<Agent> make_agent(const BackendSpec& spec) {
  if (const auto* mock = std::get_if<MockSpec>(&spec)) {
    return make_mock_agent(*mock);
  }
  return make_http_agent(std::get<BackendConfig>(spec));
}

}  // namespace ugsim
