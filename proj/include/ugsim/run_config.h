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

#ifndef UGSIM_RUN_CONFIG_H_
#define UGSIM_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ugsim/backend.h"
#include "ugsim/game.h"
#include "ugsim/prompt.h"

namespace ugsim {

// One row of the simulation grid: a model, a prompting method and the
// temperatures it is run at.
struct ExperimentPattern {
  std::string label;
  std::string model_id;
  PromptingMethod method = PromptingMethod::kZeroShot;
  std::vector<double> temperatures;
};

// The four published settings, A through D. D omits temperature 2.0.
const std::vector<ExperimentPattern>& standard_patterns();

// Differences between `patterns` and the published grid; empty on a match.
std::vector<std::string> compare_with_standard_grid(
    const std::vector<ExperimentPattern>& patterns);

enum class OfferSource { kReferenceDistribution, kUniformGrid, kFixedList };

std::string_view to_string(OfferSource source);
OfferSource parse_offer_source(std::string_view text);

struct RunConfig {
  std::string run_id = "run";
  std::vector<ExperimentPattern> patterns;
  int n_agents = 1000;
  std::vector<Side> sides = {Side::kProposer, Side::kResponder};
  OfferSource responder_offer_source = OfferSource::kReferenceDistribution;
  std::vector<int> fixed_offers;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "runs";
  bool reproducible_timestamps = false;
  bool force_cot_t2 = false;
  int max_parallel = 4;
  int requery_budget = 3;
  // Cell is abandoned after this many consecutive agents fail on backend
  // errors alone.
  int max_consecutive_backend_failures = 5;
  GameConfig game;
  // "http", "mock:equilibrium", "mock:empirical", "mock:threshold[=N]" or
  // "mock:scripted=<file>".
  std::string backend = "http";
  BackendConfig http;
  // Reference data; synthesized from (reference_seed, reference_n) if unset.
  std::optional<std::filesystem::path> reference_path;
  std::uint64_t reference_seed = 7;
  int reference_n = 1000;
  std::optional<std::filesystem::path> template_path;
  std::optional<std::filesystem::path> exemplars_path;
};

// `key = value` lines; `#` starts a comment. Patterns are given as
// `pattern.<label> = <model_id> <method> <t1> <t2> ...`. Relative file paths
// are resolved against the config file's directory. Throws LoadError with the
// offending line.
RunConfig parse_run_config(std::string_view text, const std::string& name,
                           const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

// Invariant violations, one finding each. Does not touch the filesystem.
std::vector<std::string> validate_run_config(const RunConfig& config);

nlohmann::json run_config_to_json(const RunConfig& config);
RunConfig run_config_from_json(const nlohmann::json& j);

}  // namespace ugsim

#endif  // UGSIM_RUN_CONFIG_H_
