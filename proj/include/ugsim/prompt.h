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

#ifndef UGSIM_PROMPT_H_
#define UGSIM_PROMPT_H_

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ugsim/game.h"

namespace ugsim {

enum class PromptingMethod { kZeroShot, kFewShot, kChainOfThought };
enum class Side { kProposer, kResponder };

std::string_view to_string(PromptingMethod method);
std::string_view to_string(Side side);
// Accepts the canonical names ("ZeroShot", "FewShot", "ChainOfThought") and
// the short forms "zero", "few", "cot". Throws ConfigError otherwise.
PromptingMethod parse_method(std::string_view text);
Side parse_side(std::string_view text);

// One worked example shown to the agent under few-shot and CoT prompting.
struct Exemplar {
  Side side = Side::kProposer;
  int offer = 0;
  std::optional<ResponderChoice> decision;  // responder exemplars only
  std::optional<std::string> rationale;     // required under CoT
};

inline constexpr std::string_view kOfferPlaceholder = "{offer}";

struct PromptTemplate {
  std::string game_explanation;
  std::string situation_proposer;
  std::string situation_responder;  // contains exactly one {offer}
  std::string output_format_proposer;
  std::string output_format_responder;
  std::optional<std::string> persona;
};

struct RenderedPrompt {
  std::string text;
  PromptingMethod method = PromptingMethod::kZeroShot;
  Side side = Side::kProposer;
  std::optional<int> offer_shown;  // set iff side is responder
};

class PromptError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sections in order: persona (if set), game explanation, situation, exemplar
// block (omitted for zero-shot), output format; separated by blank lines.
// Throws PromptError when the preconditions for the method/side are not met.
RenderedPrompt render_prompt(const PromptTemplate& tmpl, PromptingMethod method,
                             Side side, const std::vector<Exemplar>& exemplars,
                             std::optional<int> offer_shown);

// One finding per violated template invariant; empty when valid.
std::vector<std::string> validate_template(const PromptTemplate& tmpl);

const PromptTemplate& default_template();

// Ten exemplars per side, each with a rationale.
const std::vector<Exemplar>& default_exemplars(Side side);

// Template file: sections introduced by `[field_name]` lines, the section
// body is the text up to the next header with surrounding blank lines
// trimmed. Lines starting with `#` before the first header are comments.
PromptTemplate parse_template(std::string_view text, const std::string& name);
PromptTemplate load_template(const std::filesystem::path& path);
std::string serialize_template(const PromptTemplate& tmpl);

// Exemplar CSV: header `side,offer,decision,rationale`; the rationale is the
// remainder of the line and may contain commas.
std::vector<Exemplar> load_exemplars(const std::filesystem::path& path);

// Stable hash over the template and both exemplar lists, as 16 hex digits.
std::string prompt_hash(const PromptTemplate& tmpl,
                        const std::vector<Exemplar>& proposer_exemplars,
                        const std::vector<Exemplar>& responder_exemplars);

}  // namespace ugsim

#endif  // UGSIM_PROMPT_H_
