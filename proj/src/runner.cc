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

#include "ugsim/runner.h"

#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "ugsim/random.h"
#include "ugsim/strings.h"
#include "ugsim/transcript.h"

namespace ugsim {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr std::uint64_t kOfferStream = 0x0ffe5;

std::uint64_t cell_key(const CellSpec& cell) { return fnv1a(cell.name()); }

json counts_to_json(const CellCounts& c) {
  return {{"completed", c.completed},       {"parse_failures", c.parse_failures},
          {"requeries", c.requeries},       {"backend_errors", c.backend_errors},
          {"exhausted", c.exhausted},       {"complete", c.complete}};
}

void write_manifest(const RunManifest& manifest, const fs::path& run_dir) {
  const fs::path target = run_dir / "manifest.json";
  const fs::path tmp = run_dir / "manifest.json.tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << manifest_to_json(manifest).dump(2) << '\n';
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw IoError("cannot replace " + target.string() + ": " + ec.message());
}

// What is already on disk for a cell.
struct CellState {
  std::vector<bool> done;
  std::vector<int> attempts_used;
};

CellState scan_cell(const fs::path& path, const CellSpec& cell,
                    const RunConfig& config) {
  CellState state{std::vector<bool>(config.n_agents, false),
                  std::vector<int>(config.n_agents, 0)};
  if (!fs::exists(path)) return state;
  std::optional<std::uintmax_t> torn;
  auto records = read_transcript(path, &torn);
  if (torn) fs::resize_file(path, *torn);
  std::size_t line = 0;
  for (const auto& r : records) {
    ++line;
    if (r.run_id != config.run_id || r.pattern_label != cell.pattern_label ||
        r.temperature != cell.temperature || r.side != cell.side) {
      throw LoadError(path.string(), line, "record belongs to a different cell");
    }
    if (r.agent_index >= config.n_agents) {
      throw LoadError(path.string(), line, "agent_index beyond n_agents");
    }
    if (r.ok()) {
      if (state.done[r.agent_index]) {
        throw LoadError(path.string(), line,
                        "second successful record for agent " +
                            std::to_string(r.agent_index));
      }
      state.done[r.agent_index] = true;
    } else {
      ++state.attempts_used[r.agent_index];
    }
  }
  return state;
}

CellCounts count_cell(const fs::path& path, const RunConfig& config) {
  CellCounts c;
  if (!fs::exists(path)) return c;
  std::vector<int> failures(config.n_agents, 0);
  std::vector<bool> done(config.n_agents, false);
  // A torn final line is left for the executor to truncate.
  std::optional<std::uintmax_t> torn;
  for (const auto& r : read_transcript(path, &torn)) {
    if (r.attempt > 0) ++c.requeries;
    switch (r.outcome.index()) {
      case 0:
        ++c.completed;
        done[r.agent_index] = true;
        break;
      case 1:
        ++c.parse_failures;
        ++failures[r.agent_index];
        break;
      default:
        ++c.backend_errors;
        ++failures[r.agent_index];
        break;
    }
  }
  for (int i = 0; i < config.n_agents; ++i) {
    if (!done[i] && failures[i] > config.requery_budget) ++c.exhausted;
  }
  c.complete = c.completed == config.n_agents;
  return c;
}

struct AgentOutcome {
  std::vector<TranscriptRecord> records;
  bool success = false;
  bool backend_only = false;  // every failed attempt was a backend error
};

class CellExecutor {
 public:
  CellExecutor(const RunConfig& config, const CellSpec& cell, const PromptSetup& prompts,
               const ReferenceDataset* reference, Agent& agent,
               const RunOptions& options, std::atomic<int>& ok_written)
      : config_(config),
        cell_(cell),
        prompts_(prompts),
        agent_(agent),
        options_(options),
        ok_written_(ok_written) {
    if (cell.side == Side::kResponder) {
      offers_ = draw_responder_offers(config.responder_offer_source, config.n_agents,
                                      reference, config.fixed_offers,
                                      derive_seed(config.seed, {cell_key(cell), kOfferStream}));
    } else {
      proposer_prompt_ = render(std::nullopt);
    }
  }

  // Returns false when the run was told to stop.
  bool execute(const fs::path& path) {
    CellState state = scan_cell(path, cell_, config_);
    std::vector<int> pending;
    for (int i = 0; i < config_.n_agents; ++i) {
      if (!state.done[i] && state.attempts_used[i] <= config_.requery_budget) {
        pending.push_back(i);
      }
    }
    if (pending.empty()) return true;

    out_.open(path, std::ios::binary | std::ios::app);
    if (!out_) throw IoError("cannot append to " + path.string());

    results_.assign(pending.size(), std::nullopt);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      while (!stop_.load()) {
        std::size_t k = next.fetch_add(1);
        if (k >= pending.size()) return;
        try {
          AgentOutcome outcome =
              process_agent(pending[k], state.attempts_used[pending[k]]);
          deliver(k, std::move(outcome));
        } catch (...) {
          std::lock_guard lock(mu_);
          if (!error_) error_ = std::current_exception();
          stop_ = true;
        }
      }
    };
    const int threads =
        std::max(1, std::min<int>(config_.max_parallel, static_cast<int>(pending.size())));
    if (threads == 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    out_.close();
    if (error_) std::rethrow_exception(error_);
    if (!out_) throw IoError("write failed for " + path.string());
    return !interrupted_;
  }

 private:
  RenderedPrompt render(std::optional<int> offer) const {
    static const std::vector<Exemplar> kNone;
    const auto& exemplars = cell_.method == PromptingMethod::kZeroShot ? kNone
                            : cell_.side == Side::kProposer ? prompts_.proposer_exemplars
                                                            : prompts_.responder_exemplars;
    return render_prompt(prompts_.tmpl, cell_.method, cell_.side, exemplars, offer);
  }

  AgentOutcome process_agent(int index, int attempts_used) {
    AgentOutcome outcome;
    outcome.backend_only = true;
    RenderedPrompt prompt =
        cell_.side == Side::kProposer ? proposer_prompt_ : render(offers_[index]);
    for (int attempt = attempts_used; attempt <= config_.requery_budget; ++attempt) {
      if (stop_.load()) break;
      TranscriptRecord r;
      r.run_id = config_.run_id;
      r.pattern_label = cell_.pattern_label;
      r.model_id = cell_.model_id;
      r.method = cell_.method;
      r.temperature = cell_.temperature;
      r.side = cell_.side;
      r.agent_index = index;
      r.attempt = attempt;
      r.offer_shown = prompt.offer_shown;
      r.prompt_text = prompt.text;
      r.backend_label = agent_.label();
      try {
        AgentResponse resp = agent_.complete(prompt, {cell_key(cell_), index, attempt});
        r.raw_response = resp.raw_text;
        r.attempt_count = resp.attempt_count;
        r.backend_label = resp.backend_label;
        if (!config_.reproducible_timestamps) r.latency_ms = resp.latency_ms;
        ParseResult parsed = parse_decision(cell_.side, resp.raw_text, config_.game.total_good);
        if (auto* d = std::get_if<ParsedDecision>(&parsed)) {
          r.outcome = *d;
        } else {
          r.outcome = std::get<ParseError>(parsed);
          outcome.backend_only = false;
        }
      } catch (const BackendError& e) {
        r.outcome = BackendFailure{e.what(), e.last_status()};
      }
      if (!config_.reproducible_timestamps) r.timestamp = utc_timestamp();
      bool ok = r.ok();
      outcome.records.push_back(std::move(r));
      if (ok) {
        outcome.success = true;
        break;
      }
    }
    return outcome;
  }

  // Records are written in agent order so the file contents do not depend on
  // thread scheduling.
  void deliver(std::size_t k, AgentOutcome outcome) {
    std::lock_guard lock(mu_);
    results_[k] = std::move(outcome);
    while (flushed_ < results_.size() && results_[flushed_] && !interrupted_) {
      AgentOutcome& o = *results_[flushed_];
      for (const auto& r : o.records) {
        if (r.ok() && options_.stop_after_records &&
            ok_written_.load() >= *options_.stop_after_records) {
          interrupted_ = true;
          stop_ = true;
          break;
        }
        out_ << to_jsonl(r) << '\n';
        if (r.ok()) ++ok_written_;
      }
      if (interrupted_) break;
      out_.flush();
      if (!o.success && o.backend_only && !o.records.empty()) {
        if (++consecutive_backend_failures_ >= config_.max_consecutive_backend_failures) {
          stop_ = true;
        }
      } else {
        consecutive_backend_failures_ = 0;
      }
      results_[flushed_].reset();
      ++flushed_;
    }
  }

  const RunConfig& config_;
  const CellSpec& cell_;
  const PromptSetup& prompts_;
  Agent& agent_;
  const RunOptions& options_;
  std::atomic<int>& ok_written_;
  std::vector<int> offers_;
  RenderedPrompt proposer_prompt_;

  std::mutex mu_;
  std::ofstream out_;
  std::vector<std::optional<AgentOutcome>> results_;
  std::size_t flushed_ = 0;
  int consecutive_backend_failures_ = 0;
  std::atomic<bool> stop_{false};
  bool interrupted_ = false;
  std::exception_ptr error_;
};

void log_cell(std::ostream* log, const CellSummary& s, int n_agents) {
  if (log == nullptr) return;
  *log << "cell " << s.cell.name() << ": " << s.counts.completed << "/" << n_agents
       << " completed (" << s.counts.parse_failures << " parse failures, "
       << s.counts.requeries << " requeries, " << s.counts.backend_errors
       << " backend errors)" << (s.counts.complete ? "" : " INCOMPLETE") << '\n';
}

RunManifest execute_run(RunManifest manifest, const PromptSetup& prompts,
                        const fs::path& run_dir, const RunOptions& options) {
  const RunConfig& config = manifest.config;
  auto cells = enumerate_cells(config);
  auto reference = resolve_reference(config);

  std::vector<std::unique_ptr<Agent>> agents;
  for (const auto& cell : cells) {
    agents.push_back(options.agent_factory ? options.agent_factory(cell, config)
                                           : make_cell_agent(cell, config, reference));
  }

  manifest.status = "running";
  manifest.cells.clear();
  for (const auto& cell : cells) {
    manifest.cells.push_back({cell, cell.file_name(), count_cell(run_dir / cell.file_name(), config)});
  }
  write_manifest(manifest, run_dir);

  std::atomic<int> ok_written{0};
  bool interrupted = false;
  for (std::size_t i = 0; i < cells.size() && !interrupted; ++i) {
    const fs::path path = run_dir / cells[i].file_name();
    CellExecutor executor(config, cells[i], prompts, reference.get(), *agents[i], options,
                          ok_written);
    interrupted = !executor.execute(path);
    manifest.cells[i].counts = count_cell(path, config);
    log_cell(options.log, manifest.cells[i], config.n_agents);
    write_manifest(manifest, run_dir);
  }

  bool all_complete = std::all_of(manifest.cells.begin(), manifest.cells.end(),
                                  [](const auto& c) { return c.counts.complete; });
  manifest.status = interrupted ? "interrupted" : all_complete ? "complete" : "incomplete";
  if (!config.reproducible_timestamps) manifest.finished_at = utc_timestamp();
  write_manifest(manifest, run_dir);
  return manifest;
}

std::string join_findings(const std::vector<std::string>& findings) {
  std::string out;
  for (const auto& f : findings) out += (out.empty() ? "" : "; ") + f;
  return out;
}

}  // namespace

std::string CellSpec::name() const {
  return pattern_label + "_" + format_temperature(temperature) + "_" +
         std::string(to_string(side));
}

std::vector<CellSpec> enumerate_cells(const RunConfig& config) {
  std::vector<CellSpec> out;
  for (const auto& p : config.patterns) {
    for (double t : p.temperatures) {
      for (Side s : config.sides) out.push_back({p.label, p.model_id, p.method, t, s});
    }
  }
  return out;
}

json manifest_to_json(const RunManifest& m) {
  json cells = json::array();
  for (const auto& c : m.cells) {
    json entry = counts_to_json(c.counts);
    entry["pattern"] = c.cell.pattern_label;
    entry["model_id"] = c.cell.model_id;
    entry["method"] = to_string(c.cell.method);
    entry["temperature"] = c.cell.temperature;
    entry["side"] = to_string(c.cell.side);
    entry["file"] = c.file;
    cells.push_back(entry);
  }
  return json{
      {"run_id", m.run_id},
      {"status", m.status},
      {"template_hash", m.template_hash},
      {"responder_offer_source", to_string(m.config.responder_offer_source)},
      {"parse_failure_policy",
       "requery the same agent up to requery_budget times; no default decision is "
       "substituted"},
      {"requery_budget", m.config.requery_budget},
      {"config", run_config_to_json(m.config)},
      {"cells", cells},
      {"started_at", m.started_at ? json(*m.started_at) : json(nullptr)},
      {"finished_at", m.finished_at ? json(*m.finished_at) : json(nullptr)},
  };
}

RunManifest manifest_from_json(const json& j) {
  try {
    RunManifest m;
    m.run_id = j.at("run_id").get<std::string>();
    m.status = j.at("status").get<std::string>();
    m.template_hash = j.at("template_hash").get<std::string>();
    m.config = run_config_from_json(j.at("config"));
    for (const auto& c : j.at("cells")) {
      CellSummary s;
      s.cell = {c.at("pattern").get<std::string>(), c.at("model_id").get<std::string>(),
                parse_method(c.at("method").get<std::string>()),
                c.at("temperature").get<double>(), parse_side(c.at("side").get<std::string>())};
      s.file = c.at("file").get<std::string>();
      s.counts = {c.at("completed").get<int>(),      c.at("parse_failures").get<int>(),
                  c.at("requeries").get<int>(),      c.at("backend_errors").get<int>(),
                  c.at("exhausted").get<int>(),      c.at("complete").get<bool>()};
      m.cells.push_back(std::move(s));
    }
    if (!j.at("started_at").is_null()) m.started_at = j.at("started_at").get<std::string>();
    if (!j.at("finished_at").is_null()) m.finished_at = j.at("finished_at").get<std::string>();
    return m;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("manifest: ") + e.what());
  }
}

RunManifest read_manifest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open manifest " + path.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ConfigError("manifest " + path.string() + " is not valid JSON");
  return manifest_from_json(j);
}

std::vector<int> draw_responder_offers(OfferSource source, int n,
                                       const ReferenceDataset* reference,
                                       const std::vector<int>& fixed,
                                       std::uint64_t seed) {
  std::vector<int> out;
  out.reserve(std::max(n, 0));
  switch (source) {
    case OfferSource::kReferenceDistribution: {
      if (reference == nullptr || reference->proposer_samples.empty()) {
        throw ConfigError("reference offer source needs a reference dataset with "
                          "proposer samples");
      }
      Rng rng(seed);
      for (int i = 0; i < n; ++i) {
        out.push_back(
            reference->proposer_samples[rng.uniform_index(reference->proposer_samples.size())]
                .offer);
      }
      break;
    }
    case OfferSource::kUniformGrid:
      for (int i = 0; i < n; ++i) out.push_back((i % 21) * 5);
      break;
    case OfferSource::kFixedList:
      if (fixed.empty()) throw ConfigError("fixed offer source needs a non-empty list");
      for (int i = 0; i < n; ++i) out.push_back(fixed[i % fixed.size()]);
      break;
  }
  return out;
}

std::shared_ptr<const ReferenceDataset> resolve_reference(const RunConfig& config) {
  if (config.reference_path) {
    return std::make_shared<const ReferenceDataset>(load_reference(*config.reference_path));
  }
  return std::make_shared<const ReferenceDataset>(
      synthesize_reference(config.reference_seed, config.reference_n));
}

std::vector<std::string> load_script(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open script " + path.string());
  std::vector<std::string> out;
  std::string current;
  std::string line;
  bool any = false;
  while (std::getline(in, line)) {
    if (trim(line) == "---") {
      out.push_back(std::string(trim(current)));
      current.clear();
      continue;
    }
    any = true;
    current += line + "\n";
  }
  if (any || !current.empty()) out.push_back(std::string(trim(current)));
  return out;
}

std::unique_ptr<Agent> make_cell_agent(const CellSpec& cell, const RunConfig& config,
                                       std::shared_ptr<const ReferenceDataset> reference) {
  const std::string& b = config.backend;
  if (b == "http") {
    BackendConfig http = config.http;
    http.model_id = cell.model_id;
    http.temperature = cell.temperature;
    http.max_parallel = config.max_parallel;
    return make_http_agent(http);
  }
  MockSpec spec;
  spec.seed = config.seed;
  if (b == "mock:equilibrium") {
    spec.kind = MockKind::kEquilibrium;
  } else if (b == "mock:empirical") {
    spec.kind = MockKind::kEmpiricalSampler;
    spec.reference = reference ? reference : resolve_reference(config);
  } else if (b == "mock:threshold" || b.starts_with("mock:threshold=")) {
    spec.kind = MockKind::kThresholdResponder;
    if (b.size() > 15) {
      try {
        spec.threshold = std::stoi(b.substr(15));
      } catch (const std::exception&) {
        throw ConfigError("bad threshold in backend '" + b + "'");
      }
    }
  } else if (b.starts_with("mock:scripted=")) {
    spec.kind = MockKind::kScripted;
    spec.script = load_script(b.substr(14));
  } else {
    throw ConfigError("unknown backend '" + b + "'");
  }
  return make_mock_agent(spec);
}

PromptSetup load_prompt_setup(const RunConfig& config) {
  PromptSetup s;
  s.tmpl = config.template_path ? load_template(*config.template_path) : default_template();
  auto findings = validate_template(s.tmpl);
  if (!findings.empty()) throw ConfigError("prompt template: " + join_findings(findings));
  if (config.exemplars_path) {
    for (auto& ex : load_exemplars(*config.exemplars_path)) {
      (ex.side == Side::kProposer ? s.proposer_exemplars : s.responder_exemplars)
          .push_back(std::move(ex));
    }
  } else {
    s.proposer_exemplars = default_exemplars(Side::kProposer);
    s.responder_exemplars = default_exemplars(Side::kResponder);
  }
  s.hash = prompt_hash(s.tmpl, s.proposer_exemplars, s.responder_exemplars);
  return s;
}

RunManifest run(const RunConfig& config, const RunOptions& options) {
  auto findings = validate_run_config(config);
  if (!findings.empty()) throw ConfigError(join_findings(findings));
  PromptSetup prompts = load_prompt_setup(config);

  const fs::path run_dir = config.output_dir / config.run_id;
  if (fs::exists(run_dir) && !fs::is_empty(run_dir)) {
    throw ConfigError("run directory " + run_dir.string() +
                      " already exists; use resume to continue it");
  }
  std::error_code ec;
  fs::create_directories(run_dir, ec);
  if (ec) throw IoError("cannot create " + run_dir.string() + ": " + ec.message());

  RunManifest manifest;
  manifest.run_id = config.run_id;
  manifest.config = config;
  manifest.template_hash = prompts.hash;
  if (!config.reproducible_timestamps) manifest.started_at = utc_timestamp();
  return execute_run(std::move(manifest), prompts, run_dir, options);
}

RunManifest resume(const fs::path& manifest_path, const RunOptions& options) {
  RunManifest manifest = read_manifest(manifest_path);
  const fs::path run_dir = manifest_path.parent_path();
  manifest.config.output_dir = run_dir.parent_path();
  auto findings = validate_run_config(manifest.config);
  if (!findings.empty()) throw ConfigError(join_findings(findings));
  PromptSetup prompts = load_prompt_setup(manifest.config);
  if (prompts.hash != manifest.template_hash) {
    throw ResumeMismatch("prompt template hash " + prompts.hash +
                         " does not match the run's " + manifest.template_hash +
                         "; refusing to mix prompts within a run");
  }
  manifest.finished_at.reset();
  return execute_run(std::move(manifest), prompts, run_dir, options);
}

}  // namespace ugsim
