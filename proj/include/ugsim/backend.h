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

#ifndef UGSIM_BACKEND_H_
#define UGSIM_BACKEND_H_

#include <chrono>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ugsim/prompt.h"
#include "ugsim/reference_data.h"

namespace ugsim {

inline constexpr const char* kDefaultApiKeyEnv = "OPENAI_API_KEY";

// Chat-completions service settings. model_id and temperature are set per
// cell by the runner.
struct BackendConfig {
  std::string endpoint = "https://api.openai.com/v1";
  std::string model_id;
  double temperature = 1.0;
  double request_timeout_s = 60;
  int max_retries = 5;
  int max_parallel = 4;
  std::string api_key_env = kDefaultApiKeyEnv;
  std::chrono::milliseconds backoff_initial{1000};
  std::chrono::milliseconds backoff_cap{60000};
};

// Empty when the config is usable.
std::vector<std::string> validate_backend_config(const BackendConfig& config);

struct AgentResponse {
  std::string raw_text;
  double latency_ms = 0;
  int attempt_count = 1;
  std::string backend_label;
};

enum class MockKind { kEquilibrium, kEmpiricalSampler, kThresholdResponder, kScripted };

std::string_view to_string(MockKind kind);

struct MockSpec {
  MockKind kind = MockKind::kEquilibrium;
  std::uint64_t seed = 0;
  // EmpiricalSampler: offers and per-offer acceptance come from here.
  std::shared_ptr<const ReferenceDataset> reference;
  // ThresholdResponder: accepts iff offer > threshold.
  int threshold = 20;
  // Scripted: response for (agent i, attempt a) is script[(i + a) % size].
  std::vector<std::string> script;
};

using BackendSpec = std::variant<BackendConfig, MockSpec>;

// Identifies one backend call. Mock randomness is a function of these
// fields only, so results do not depend on completion order.
struct CallContext {
  std::uint64_t stream_key = 0;
  int agent_index = 0;
  int attempt = 0;
};

class BackendError : public std::runtime_error {
 public:
  BackendError(const std::string& what, int last_status)
      : std::runtime_error(what), last_status_(last_status) {}
  int last_status() const { return last_status_; }

 private:
  int last_status_;
};

class TimeoutError : public BackendError {
 public:
  explicit TimeoutError(const std::string& what) : BackendError(what, 0) {}
};

// One stateless agent per call; safe to call from several threads.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual AgentResponse complete(const RenderedPrompt& prompt,
                                 const CallContext& context) = 0;
  virtual std::string label() const = 0;
};

// Throws ConfigError for incomplete mock parameters or, for HTTP, a missing
// API key.
std::unique_ptr<Agent> make_agent(const BackendSpec& spec);
std::unique_ptr<Agent> make_mock_agent(const MockSpec& spec);
std::unique_ptr<Agent> make_http_agent(const BackendConfig& config);

// {"model", "temperature", "messages": [{"role": "user", "content"}]}
nlohmann::json build_request(const BackendConfig& config,
                             const RenderedPrompt& prompt);

// Delay before retry number `retry` (0-based): initial * 2^retry with a
// +/-20% jitter, capped. `jitter_unit` is uniform in [0, 1).
std::chrono::milliseconds backoff_delay(const BackendConfig& config, int retry,
                                        double jitter_unit);

// Text the mocks emit, also used by parser round-trip tests.
std::string mock_proposer_text(int offer);
std::string mock_responder_text(ResponderChoice choice);

}  // namespace ugsim

#endif  // UGSIM_BACKEND_H_
