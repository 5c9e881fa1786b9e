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
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <random>
#include <semaphore>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "ugsim/backend.h"
#include "ugsim/errors.h"

namespace ugsim {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct Endpoint {
  std::string origin;     // scheme://host[:port]
  std::string base_path;  // without trailing slash
};

Endpoint split_endpoint(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("endpoint '" + url + "' lacks a scheme");
  }
  std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw ConfigError("endpoint scheme must be http or https: " + url);
  }
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (scheme == "https") {
    throw ConfigError("this build has no TLS support; use an http endpoint");
  }
#endif
  auto path_start = url.find('/', scheme_end + 3);
  Endpoint out;
  out.origin = url.substr(0, path_start);
  if (path_start != std::string::npos) out.base_path = url.substr(path_start);
  while (!out.base_path.empty() && out.base_path.back() == '/') {
    out.base_path.pop_back();
  }
  return out;
}

bool retryable(int status) { return status == 429 || status >= 500; }

class HttpAgent : public Agent {
 public:
  HttpAgent(BackendConfig config, std::string api_key)
      : config_(std::move(config)),
        api_key_(std::move(api_key)),
        endpoint_(split_endpoint(config_.endpoint)),
        slots_(std::max(1, config_.max_parallel)),
        jitter_rng_(std::random_device{}()) {}

  AgentResponse complete(const RenderedPrompt& prompt,
                         const CallContext&) override {
    const std::string body = build_request(config_, prompt).dump();
    const std::string path = endpoint_.base_path + "/chat/completions";
    const auto timeout = std::chrono::duration<double>(config_.request_timeout_s);
    const auto start = Clock::now();
    int last_status = 0;
    std::string last_error;

    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
      if (attempt > 0) std::this_thread::sleep_for(next_delay(attempt - 1));

      httplib::Result res{nullptr, httplib::Error::Unknown};
      const auto sent = Clock::now();
      {
        slots_.acquire();
        httplib::Client client(endpoint_.origin);
        auto usec = std::chrono::duration_cast<std::chrono::microseconds>(timeout);
        client.set_connection_timeout(usec);
        client.set_read_timeout(usec);
        client.set_write_timeout(usec);
        client.set_bearer_token_auth(api_key_);
        res = client.Post(path, body, "application/json");
        slots_.release();
      }
      const auto elapsed = Clock::now() - sent;

      if (!res) {
        if (elapsed >= timeout * 0.9) {
          throw TimeoutError("request to " + config_.endpoint + " timed out after " +
                             std::to_string(config_.request_timeout_s) + " s");
        }
        last_status = 0;
        last_error = httplib::to_string(res.error());
        continue;
      }
      last_status = res->status;
      if (res->status == 200) {
        AgentResponse out;
        out.raw_text = extract_content(res->body);
        out.latency_ms =
            std::chrono::duration<double, std::milli>(Clock::now() - start).count();
        out.attempt_count = attempt + 1;
        out.backend_label = label();
        return out;
      }
      last_error = "HTTP " + std::to_string(res->status);
      if (!retryable(res->status)) {
        throw BackendError("non-retryable response from " + config_.endpoint +
                               ": " + last_error,
                           res->status);
      }
    }
    throw BackendError("retries exhausted for " + config_.endpoint + " (" +
                           std::to_string(config_.max_retries + 1) +
                           " attempts, last: " + last_error + ")",
                       last_status);
  }

  std::string label() const override { return "http:" + config_.model_id; }

 private:
  std::chrono::milliseconds next_delay(int retry) {
    double unit;
    {
      std::lock_guard lock(jitter_mu_);
      unit = std::uniform_real_distribution<double>(0.0, 1.0)(jitter_rng_);
    }
    return backoff_delay(config_, retry, unit);
  }

  static std::string extract_content(const std::string& body) {
    json parsed = json::parse(body, nullptr, false);
    if (parsed.is_discarded()) {
      throw BackendError("response body is not JSON", 200);
    }
    const json* content = nullptr;
    if (parsed.contains("choices") && parsed["choices"].is_array() &&
        !parsed["choices"].empty()) {
      const json& choice = parsed["choices"][0];
      if (choice.contains("message") && choice["message"].contains("content")) {
        content = &choice["message"]["content"];
      }
    }
    if (content == nullptr) {
      throw BackendError("response lacks choices[0].message.content", 200);
    }
    return content->is_string() ? content->get<std::string>() : std::string();
  }

  BackendConfig config_;
  std::string api_key_;
  Endpoint endpoint_;
  std::counting_semaphore<> slots_;
  std::mutex jitter_mu_;
  std::mt19937_64 jitter_rng_;
};

}  // namespace

std::vector<std::string> validate_backend_config(const BackendConfig& config) {
  std::vector<std::string> findings;
  if (!(config.temperature >= 0 && config.temperature <= 2)) {
    findings.push_back("temperature must lie in [0, 2]");
  }
  if (config.max_retries < 0) findings.push_back("max_retries must be >= 0");
  if (config.max_parallel < 1) findings.push_back("max_parallel must be >= 1");
  if (!(config.request_timeout_s > 0)) {
    findings.push_back("request_timeout must be positive");
  }
  if (config.api_key_env.empty()) findings.push_back("api_key_env is empty");
  return findings;
}

json build_request(const BackendConfig& config, const RenderedPrompt& prompt) {
  return json{
      {"model", config.model_id},
      {"temperature", config.temperature},
      {"messages", json::array({json{{"role", "user"}, {"content", prompt.text}}})},
  };
}

std::chrono::milliseconds backoff_delay(const BackendConfig& config, int retry,
                                        double jitter_unit) {
  double base = static_cast<double>(config.backoff_initial.count()) *
                std::pow(2.0, std::min(retry, 30));
  double jittered = base * (0.8 + 0.4 * jitter_unit);
  double capped = std::min(jittered, static_cast<double>(config.backoff_cap.count()));
  return std::chrono::milliseconds(static_cast<std::int64_t>(std::llround(capped)));
}

std::unique_ptr<Agent> make_http_agent(const BackendConfig& config) {
  auto findings = validate_backend_config(config);
  if (!findings.empty()) throw ConfigError("backend config: " + findings.front());
  const char* key = std::getenv(config.api_key_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw ConfigError("API key environment variable " + config.api_key_env +
                      " is not set");
  }
  return std::make_unique<HttpAgent>(config, key);
}

}  // namespace ugsim
