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

#ifndef UGSIM_RUNNER_H_
#define UGSIM_RUNNER_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ugsim/backend.h"
#include "ugsim/errors.h"
#include "ugsim/reference_data.h"
#include "ugsim/run_config.h"

namespace ugsim {

// One (pattern, temperature, side) combination.
struct CellSpec {
  std::string pattern_label;
  std::string model_id;
  PromptingMethod method = PromptingMethod::kZeroShot;
  double temperature = 0;
  Side side = Side::kProposer;

  // `<pattern>_<temperature>_<side>`, e.g. "B_0.5_proposer".
  std::string name() const;
  std::string file_name() const { return name() + ".jsonl"; }
};

// Cells in execution order: pattern, then temperature, then side.
std::vector<CellSpec> enumerate_cells(const RunConfig& config);

struct CellCounts {
  int completed = 0;
  int parse_failures = 0;
  int requeries = 0;
  int backend_errors = 0;
  int exhausted = 0;  // agents that used up the requery budget
  bool complete = false;
};

struct CellSummary {
  CellSpec cell;
  std::string file;
  CellCounts counts;
};

struct RunManifest {
  std::string run_id;
  std::string status;  // running, complete, incomplete, interrupted
  RunConfig config;
  std::string template_hash;
  std::vector<CellSummary> cells;
  std::optional<std::string> started_at;
  std::optional<std::string> finished_at;

  bool complete() const { return status == "complete"; }
};

nlohmann::json manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const nlohmann::json& j);
RunManifest read_manifest(const std::filesystem::path& path);

class ResumeMismatch : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

using AgentFactory =
    std::function<std::unique_ptr<Agent>(const CellSpec& cell, const RunConfig& config)>;

struct RunOptions {
  // Replaces the backend named in the config; for tests and embedding.
  AgentFactory agent_factory;
  // Stops after this many successful records have been written in this
  // invocation, leaving the run as an interrupted run would be.
  std::optional<int> stop_after_records;
  std::ostream* log = nullptr;
};

// Offers shown to `n` responders. ReferenceDistribution samples the
// reference proposer offers with replacement; UniformGrid cycles 0, 5, ...,
// 100; FixedList repeats `fixed` to length n. Throws ConfigError when the
// required input is missing.
std::vector<int> draw_responder_offers(OfferSource source, int n,
                                       const ReferenceDataset* reference,
                                       const std::vector<int>& fixed,
                                       std::uint64_t seed);

// The dataset the config points at, or the synthetic stand-in.
std::shared_ptr<const ReferenceDataset> resolve_reference(const RunConfig& config);

// Builds the backend named by config.backend for one cell. The reference is
// resolved from the config when not supplied and the backend needs one.
std::unique_ptr<Agent> make_cell_agent(
    const CellSpec& cell, const RunConfig& config,
    std::shared_ptr<const ReferenceDataset> reference = nullptr);

// Responses for the scripted mock: the file is split on lines holding only
// `---`.
std::vector<std::string> load_script(const std::filesystem::path& path);

// Runs every cell into <output_dir>/<run_id>/. Throws ConfigError on an
// invalid config or an existing run directory, IoError when outputs cannot be
// written. Cells whose backend keeps failing are reported incomplete.
RunManifest run(const RunConfig& config, const RunOptions& options = {});

// Continues the run whose manifest is at `manifest_path`, querying only the
// agents without a successful record. Refuses with ResumeMismatch when the
// prompt template or exemplars changed since the run started.
RunManifest resume(const std::filesystem::path& manifest_path,
                   const RunOptions& options = {});

// Loads the template and exemplars a config refers to.
struct PromptSetup {
  PromptTemplate tmpl;
  std::vector<Exemplar> proposer_exemplars;
  std::vector<Exemplar> responder_exemplars;
  std::string hash;
};
PromptSetup load_prompt_setup(const RunConfig& config);

}  // namespace ugsim

#endif  // UGSIM_RUNNER_H_
