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

#include "ugsim/run_config.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ugsim/errors.h"
#include "ugsim/strings.h"

namespace ugsim {
namespace {

using nlohmann::json;

const std::vector<double> kFiveTemperatures = {0.0, 0.5, 1.0, 1.5, 2.0};

bool safe_name(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ||
           c == '.';
  });
}

bool backend_known(std::string_view b) {
  return b == "http" || b == "mock:equilibrium" || b == "mock:empirical" ||
         b == "mock:threshold" || b.starts_with("mock:threshold=") ||
         b.starts_with("mock:scripted=");
}

double parse_real(std::string_view s, const std::string& name, std::size_t line,
                  const std::string& key) {
  std::string text(trim(s));
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw LoadError(name, line, "key '" + key + "': not a number: '" + text + "'");
}

long long parse_integer(std::string_view s, const std::string& name,
                        std::size_t line, const std::string& key) {
  std::string_view t = trim(s);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw LoadError(name, line,
                    "key '" + key + "': not an integer: '" + std::string(t) + "'");
  }
  return v;
}

bool parse_bool(std::string_view s, const std::string& name, std::size_t line,
                const std::string& key) {
  std::string t = to_lower(trim(s));
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw LoadError(name, line, "key '" + key + "': expected true or false");
}

std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (std::isspace(static_cast<unsigned char>(s[i])) || s[i] == ',')) ++i;
    std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != ',') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, std::string_view p) {
  std::filesystem::path path{std::string(trim(p))};
  if (path.is_relative() && !base.empty()) return base / path;
  return path;
}

}  // namespace

const std::vector<ExperimentPattern>& standard_patterns() {
  static const std::vector<ExperimentPattern> kPatterns = {
      {"A", "gpt-3.5-turbo-0613", PromptingMethod::kZeroShot, kFiveTemperatures},
      {"B", "gpt-4-1106-preview", PromptingMethod::kZeroShot, kFiveTemperatures},
      {"C", "gpt-4-1106-preview", PromptingMethod::kFewShot, kFiveTemperatures},
      {"D", "gpt-4-1106-preview", PromptingMethod::kChainOfThought,
       {0.0, 0.5, 1.0, 1.5}},
  };
  return kPatterns;
}

std::vector<std::string> compare_with_standard_grid(
    const std::vector<ExperimentPattern>& patterns) {
  std::vector<std::string> diffs;
  const auto& ref = standard_patterns();
  if (patterns.size() != ref.size()) {
    diffs.push_back("expected " + std::to_string(ref.size()) + " patterns, got " +
                    std::to_string(patterns.size()));
  }
  for (const auto& want : ref) {
    auto it = std::find_if(patterns.begin(), patterns.end(),
                           [&](const auto& p) { return p.label == want.label; });
    if (it == patterns.end()) {
      diffs.push_back("pattern " + want.label + " missing");
      continue;
    }
    if (it->model_id != want.model_id) {
      diffs.push_back("pattern " + want.label + ": model " + it->model_id +
                      ", expected " + want.model_id);
    }
    if (it->method != want.method) {
      diffs.push_back("pattern " + want.label + ": method " +
                      std::string(to_string(it->method)) + ", expected " +
                      std::string(to_string(want.method)));
    }
    if (it->temperatures != want.temperatures) {
      diffs.push_back("pattern " + want.label + ": temperatures differ");
    }
  }
  return diffs;
}

std::string_view to_string(OfferSource source) {
  switch (source) {
    case OfferSource::kReferenceDistribution:
      return "reference";
    case OfferSource::kUniformGrid:
      return "uniform";
    case OfferSource::kFixedList:
      return "fixed";
  }
  return "reference";
}

OfferSource parse_offer_source(std::string_view text) {
  std::string t = to_lower(trim(text));
  if (t == "reference" || t == "referencedistribution") {
    return OfferSource::kReferenceDistribution;
  }
  if (t == "uniform" || t == "uniformgrid") return OfferSource::kUniformGrid;
  if (t == "fixed" || t == "fixedlist") return OfferSource::kFixedList;
  throw ConfigError("unknown responder offer source '" + std::string(text) + "'");
}

RunConfig parse_run_config(std::string_view text, const std::string& name,
                           const std::filesystem::path& base_dir) {
  RunConfig c;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  for (std::string_view raw : split(text, '\n')) {
    ++line_no;
    auto hash = raw.find('#');
    std::string_view line = trim(raw.substr(0, hash));
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw LoadError(name, line_no, "expected 'key = value'");
    }
    std::string key(trim(line.substr(0, eq)));
    std::string_view value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) {
      throw LoadError(name, line_no, "duplicate key '" + key + "'");
    }
    try {
      if (key.starts_with("pattern.")) {
        ExperimentPattern p;
        p.label = key.substr(8);
        auto parts = words(value);
        if (parts.size() < 3) {
          throw LoadError(name, line_no,
                          "key '" + key + "': expected <model> <method> <temperatures...>");
        }
        p.model_id = std::string(parts[0]);
        p.method = parse_method(parts[1]);
        for (std::size_t i = 2; i < parts.size(); ++i) {
          p.temperatures.push_back(parse_real(parts[i], name, line_no, key));
        }
        c.patterns.push_back(std::move(p));
      } else if (key == "run_id") {
        c.run_id = std::string(value);
      } else if (key == "n_agents") {
        c.n_agents = static_cast<int>(parse_integer(value, name, line_no, key));
      } else if (key == "sides") {
        c.sides.clear();
        for (auto w : words(value)) c.sides.push_back(parse_side(w));
      } else if (key == "responder_offer_source") {
        c.responder_offer_source = parse_offer_source(value);
      } else if (key == "fixed_offers") {
        for (auto w : words(value)) {
          c.fixed_offers.push_back(
              static_cast<int>(parse_integer(w, name, line_no, key)));
        }
      } else if (key == "seed") {
        c.seed = static_cast<std::uint64_t>(parse_integer(value, name, line_no, key));
      } else if (key == "output_dir") {
        c.output_dir = std::string(value);
      } else if (key == "reproducible_timestamps") {
        c.reproducible_timestamps = parse_bool(value, name, line_no, key);
      } else if (key == "force_cot_t2") {
        c.force_cot_t2 = parse_bool(value, name, line_no, key);
      } else if (key == "max_parallel") {
        c.max_parallel = static_cast<int>(parse_integer(value, name, line_no, key));
        c.http.max_parallel = c.max_parallel;
      } else if (key == "requery_budget") {
        c.requery_budget = static_cast<int>(parse_integer(value, name, line_no, key));
      } else if (key == "total_good") {
        c.game.total_good = static_cast<int>(parse_integer(value, name, line_no, key));
      } else if (key == "redemption_rate") {
        c.game.redemption_rate = parse_real(value, name, line_no, key);
      } else if (key == "backend") {
        c.backend = std::string(value);
      } else if (key == "endpoint") {
        c.http.endpoint = std::string(value);
      } else if (key == "api_key_env") {
        c.http.api_key_env = std::string(value);
      } else if (key == "request_timeout") {
        c.http.request_timeout_s = parse_real(value, name, line_no, key);
      } else if (key == "max_retries") {
        c.http.max_retries = static_cast<int>(parse_integer(value, name, line_no, key));
      } else if (key == "reference") {
        c.reference_path = resolve(base_dir, value);
      } else if (key == "reference_seed") {
        c.reference_seed =
            static_cast<std::uint64_t>(parse_integer(value, name, line_no, key));
      } else if (key == "reference_n") {
        c.reference_n = static_cast<int>(parse_integer(value, name, line_no, key));
      } else if (key == "template") {
        c.template_path = resolve(base_dir, value);
      } else if (key == "exemplars") {
        c.exemplars_path = resolve(base_dir, value);
      } else {
        throw LoadError(name, line_no, "unknown key '" + key + "'");
      }
    } catch (const LoadError&) {
      throw;
    } catch (const ConfigError& e) {
      throw LoadError(name, line_no, "key '" + key + "': " + e.what());
    }
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str(), path.string(), path.parent_path());
}

std::vector<std::string> validate_run_config(const RunConfig& c) {
  std::vector<std::string> f;
  if (!safe_name(c.run_id)) f.push_back("run_id must be a plain file name");
  if (c.patterns.empty()) f.push_back("no patterns configured");
  std::set<std::string> labels;
  for (const auto& p : c.patterns) {
    if (!safe_name(p.label)) f.push_back("pattern label '" + p.label + "' is not a plain name");
    if (!labels.insert(p.label).second) f.push_back("duplicate pattern " + p.label);
    if (p.model_id.empty()) f.push_back("pattern " + p.label + " has no model");
    if (p.temperatures.empty()) f.push_back("pattern " + p.label + " has no temperatures");
    std::set<double> temps;
    for (double t : p.temperatures) {
      if (!(t >= 0 && t <= 2)) {
        f.push_back("pattern " + p.label + ": temperature " + format_temperature(t) +
                    " outside [0, 2]");
      }
      if (!temps.insert(t).second) {
        f.push_back("pattern " + p.label + ": duplicate temperature " +
                    format_temperature(t));
      }
      if (p.method == PromptingMethod::kChainOfThought && t >= 2.0 &&
          !c.force_cot_t2) {
        f.push_back("pattern " + p.label +
                    ": chain-of-thought at temperature 2.0 is excluded from the "
                    "grid; pass --force-cot-t2 to run it anyway");
      }
    }
  }
  if (c.n_agents < 1) f.push_back("n_agents must be >= 1");
  if (c.sides.empty()) f.push_back("at least one side is required");
  if (c.responder_offer_source == OfferSource::kFixedList) {
    if (c.fixed_offers.empty()) f.push_back("fixed offer source needs fixed_offers");
    for (int o : c.fixed_offers) {
      if (o < 0 || o > c.game.total_good) {
        f.push_back("fixed offer " + std::to_string(o) + " out of range");
      }
    }
  }
  if (c.max_parallel < 1) f.push_back("max_parallel must be >= 1");
  if (c.requery_budget < 0) f.push_back("requery_budget must be >= 0");
  if (c.max_consecutive_backend_failures < 1) {
    f.push_back("max_consecutive_backend_failures must be >= 1");
  }
  if (!c.game.valid()) f.push_back("total_good and redemption_rate must be positive");
  if (c.reference_n < 100 && !c.reference_path) f.push_back("reference_n must be >= 100");
  if (!backend_known(c.backend)) f.push_back("unknown backend '" + c.backend + "'");
  if (c.backend == "http") {
    BackendConfig probe = c.http;
    probe.temperature = 0;
    for (auto& s : validate_backend_config(probe)) f.push_back(s);
  }
  return f;
}

json run_config_to_json(const RunConfig& c) {
  json patterns = json::array();
  for (const auto& p : c.patterns) {
    patterns.push_back({{"label", p.label},
                        {"model_id", p.model_id},
                        {"method", to_string(p.method)},
                        {"temperatures", p.temperatures}});
  }
  json sides = json::array();
  for (Side s : c.sides) sides.push_back(to_string(s));
  auto opt_path = [](const std::optional<std::filesystem::path>& p) {
    return p ? json(p->string()) : json(nullptr);
  };
  return json{
      {"run_id", c.run_id},
      {"patterns", patterns},
      {"n_agents", c.n_agents},
      {"sides", sides},
      {"responder_offer_source", to_string(c.responder_offer_source)},
      {"fixed_offers", c.fixed_offers},
      {"seed", c.seed},
      {"output_dir", c.output_dir.string()},
      {"reproducible_timestamps", c.reproducible_timestamps},
      {"force_cot_t2", c.force_cot_t2},
      {"max_parallel", c.max_parallel},
      {"requery_budget", c.requery_budget},
      {"max_consecutive_backend_failures", c.max_consecutive_backend_failures},
      {"total_good", c.game.total_good},
      {"redemption_rate", c.game.redemption_rate},
      {"backend", c.backend},
      {"endpoint", c.http.endpoint},
      {"api_key_env", c.http.api_key_env},
      {"request_timeout", c.http.request_timeout_s},
      {"max_retries", c.http.max_retries},
      {"reference", opt_path(c.reference_path)},
      {"reference_seed", c.reference_seed},
      {"reference_n", c.reference_n},
      {"template", opt_path(c.template_path)},
      {"exemplars", opt_path(c.exemplars_path)},
  };
}

RunConfig run_config_from_json(const json& j) {
  try {
    RunConfig c;
    c.run_id = j.at("run_id").get<std::string>();
    for (const auto& p : j.at("patterns")) {
      c.patterns.push_back({p.at("label").get<std::string>(),
                            p.at("model_id").get<std::string>(),
                            parse_method(p.at("method").get<std::string>()),
                            p.at("temperatures").get<std::vector<double>>()});
    }
    c.n_agents = j.at("n_agents").get<int>();
    c.sides.clear();
    for (const auto& s : j.at("sides")) c.sides.push_back(parse_side(s.get<std::string>()));
    c.responder_offer_source =
        parse_offer_source(j.at("responder_offer_source").get<std::string>());
    c.fixed_offers = j.at("fixed_offers").get<std::vector<int>>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.output_dir = j.at("output_dir").get<std::string>();
    c.reproducible_timestamps = j.at("reproducible_timestamps").get<bool>();
    c.force_cot_t2 = j.at("force_cot_t2").get<bool>();
    c.max_parallel = j.at("max_parallel").get<int>();
    c.requery_budget = j.at("requery_budget").get<int>();
    c.max_consecutive_backend_failures =
        j.at("max_consecutive_backend_failures").get<int>();
    c.game.total_good = j.at("total_good").get<int>();
    c.game.redemption_rate = j.at("redemption_rate").get<double>();
    c.backend = j.at("backend").get<std::string>();
    c.http.endpoint = j.at("endpoint").get<std::string>();
    c.http.api_key_env = j.at("api_key_env").get<std::string>();
    c.http.request_timeout_s = j.at("request_timeout").get<double>();
    c.http.max_retries = j.at("max_retries").get<int>();
    c.http.max_parallel = c.max_parallel;
    auto opt_path = [&](const char* key) -> std::optional<std::filesystem::path> {
      if (j.at(key).is_null()) return std::nullopt;
      return std::filesystem::path(j.at(key).get<std::string>());
    };
    c.reference_path = opt_path("reference");
    c.reference_seed = j.at("reference_seed").get<std::uint64_t>();
    c.reference_n = j.at("reference_n").get<int>();
    c.template_path = opt_path("template");
    c.exemplars_path = opt_path("exemplars");
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config snapshot: ") + e.what());
  }
}

}  // namespace ugsim
