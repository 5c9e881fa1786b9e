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

#include "ugsim/transcript.h"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ugsim/errors.h"

namespace ugsim {

using nlohmann::json;

std::string_view status_of(const TranscriptRecord& record) {
  switch (record.outcome.index()) {
    case 0:
      return "ok";
    case 1:
      return "parse_error";
    default:
      return "backend_error";
  }
}

json record_to_json(const TranscriptRecord& r) {
  json j{
      {"run_id", r.run_id},
      {"pattern", r.pattern_label},
      {"model_id", r.model_id},
      {"method", to_string(r.method)},
      {"temperature", r.temperature},
      {"side", to_string(r.side)},
      {"agent_index", r.agent_index},
      {"attempt", r.attempt},
      {"offer_shown", r.offer_shown ? json(*r.offer_shown) : json(nullptr)},
      {"prompt_text", r.prompt_text},
      {"raw_response", r.raw_response},
      {"status", status_of(r)},
      {"attempt_count", r.attempt_count},
      {"backend", r.backend_label},
      {"timestamp", r.timestamp ? json(*r.timestamp) : json(nullptr)},
  };
  if (r.latency_ms) j["latency_ms"] = *r.latency_ms;
  if (const auto* d = std::get_if<ParsedDecision>(&r.outcome)) {
    json parsed{{"extraction_mode", to_string(d->extraction_mode)}};
    if (d->offer) parsed["offer"] = *d->offer;
    if (d->choice) parsed["decision"] = to_string(*d->choice);
    j["parsed"] = parsed;
    j["error"] = nullptr;
  } else if (const auto* e = std::get_if<ParseError>(&r.outcome)) {
    j["parsed"] = nullptr;
    j["error"] = {{"kind", to_string(e->kind)}, {"excerpt", e->excerpt}};
  } else {
    const auto& b = std::get<BackendFailure>(r.outcome);
    j["parsed"] = nullptr;
    j["error"] = {{"kind", "BackendError"}, {"message", b.message}, {"status", b.status}};
  }
  return j;
}

TranscriptRecord record_from_json(const json& j) {
  try {
    TranscriptRecord r;
    r.run_id = j.at("run_id").get<std::string>();
    r.pattern_label = j.at("pattern").get<std::string>();
    r.model_id = j.at("model_id").get<std::string>();
    r.method = parse_method(j.at("method").get<std::string>());
    r.temperature = j.at("temperature").get<double>();
    r.side = parse_side(j.at("side").get<std::string>());
    r.agent_index = j.at("agent_index").get<int>();
    r.attempt = j.at("attempt").get<int>();
    if (!j.at("offer_shown").is_null()) r.offer_shown = j.at("offer_shown").get<int>();
    r.prompt_text = j.at("prompt_text").get<std::string>();
    r.raw_response = j.at("raw_response").get<std::string>();
    r.attempt_count = j.at("attempt_count").get<int>();
    r.backend_label = j.at("backend").get<std::string>();
    if (!j.at("timestamp").is_null()) r.timestamp = j.at("timestamp").get<std::string>();
    if (j.contains("latency_ms")) r.latency_ms = j.at("latency_ms").get<double>();
    if (r.agent_index < 0) throw ConfigError("negative agent_index");
    if (r.offer_shown.has_value() != (r.side == Side::kResponder)) {
      throw ConfigError("offer_shown must be present exactly for responder records");
    }

    const std::string status = j.at("status").get<std::string>();
    if (status == "ok") {
      const json& p = j.at("parsed");
      ParsedDecision d;
      d.side = r.side;
      d.extraction_mode = parse_extraction_mode(p.at("extraction_mode").get<std::string>());
      if (r.side == Side::kProposer) {
        d.offer = p.at("offer").get<int>();
      } else {
        std::string decision = p.at("decision").get<std::string>();
        if (decision == "accept") {
          d.choice = ResponderChoice::kAccept;
        } else if (decision == "reject") {
          d.choice = ResponderChoice::kReject;
        } else {
          throw ConfigError("invalid decision '" + decision + "'");
        }
      }
      r.outcome = d;
    } else if (status == "parse_error") {
      const json& e = j.at("error");
      r.outcome = ParseError{parse_error_kind(e.at("kind").get<std::string>()),
                             e.at("excerpt").get<std::string>()};
    } else if (status == "backend_error") {
      const json& e = j.at("error");
      r.outcome = BackendFailure{e.at("message").get<std::string>(),
                                 e.at("status").get<int>()};
    } else {
      throw ConfigError("unknown status '" + status + "'");
    }
    return r;
  } catch (const json::exception& e) {
    throw ConfigError(e.what());
  }
}

std::string to_jsonl(const TranscriptRecord& record) {
  return record_to_json(record).dump(-1, ' ', false, json::error_handler_t::replace);
}

std::vector<TranscriptRecord> read_transcript(
    const std::filesystem::path& path,
    std::optional<std::uintmax_t>* torn_tail_offset) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open transcript " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string data = buf.str();

  std::vector<TranscriptRecord> out;
  if (torn_tail_offset) torn_tail_offset->reset();
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < data.size()) {
    ++line_no;
    std::size_t nl = data.find('\n', pos);
    bool terminated = nl != std::string::npos;
    std::string_view line(data.data() + pos, (terminated ? nl : data.size()) - pos);
    if (!terminated && torn_tail_offset) {
      *torn_tail_offset = pos;
      break;
    }
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw LoadError(path.string(), line_no, "corrupt transcript line (invalid JSON)");
    }
    try {
      out.push_back(record_from_json(j));
    } catch (const ConfigError& e) {
      throw LoadError(path.string(), line_no,
                      std::string("corrupt transcript line: ") + e.what());
    }
    pos = terminated ? nl + 1 : data.size();
  }
  return out;
}

}  // namespace ugsim
