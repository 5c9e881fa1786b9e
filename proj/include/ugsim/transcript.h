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

#ifndef UGSIM_TRANSCRIPT_H_
#define UGSIM_TRANSCRIPT_H_

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ugsim/parser.h"
#include "ugsim/prompt.h"

namespace ugsim {

// The backend itself failed; no text to parse.
struct BackendFailure {
  std::string message;
  int status = 0;
  friend bool operator==(const BackendFailure&, const BackendFailure&) = default;
};

using RecordOutcome = std::variant<ParsedDecision, ParseError, BackendFailure>;

// One backend call for one agent. A cell's transcript holds exactly one
// ParsedDecision record per completed agent, plus failed attempts.
struct TranscriptRecord {
  std::string run_id;
  std::string pattern_label;
  std::string model_id;
  PromptingMethod method = PromptingMethod::kZeroShot;
  double temperature = 0;
  Side side = Side::kProposer;
  int agent_index = 0;
  int attempt = 0;  // 0 for the first query, then one per requery
  std::optional<int> offer_shown;
  std::string prompt_text;
  std::string raw_response;
  RecordOutcome outcome;
  int attempt_count = 1;  // HTTP attempts inside the backend call
  std::string backend_label;
  std::optional<double> latency_ms;
  std::optional<std::string> timestamp;

  bool ok() const { return std::holds_alternative<ParsedDecision>(outcome); }
};

std::string_view status_of(const TranscriptRecord& record);

nlohmann::json record_to_json(const TranscriptRecord& record);
// Throws ConfigError describing the first missing or invalid field.
TranscriptRecord record_from_json(const nlohmann::json& j);

// Single line, no trailing newline. Invalid UTF-8 is replaced.
std::string to_jsonl(const TranscriptRecord& record);

// Reads every record. A final line without a newline is a torn write: it is
// reported through `torn_tail_offset` (byte offset where it starts) when the
// pointer is non-null and ignored; otherwise any invalid line throws
// LoadError naming the file and line.
std::vector<TranscriptRecord> read_transcript(
    const std::filesystem::path& path,
    std::optional<std::uintmax_t>* torn_tail_offset = nullptr);

}  // namespace ugsim

#endif  // UGSIM_TRANSCRIPT_H_
