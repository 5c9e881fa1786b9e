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

#include "ugsim/cli.h"

#include <algorithm>
#include <iostream>
#include <set>

#include <CLI11.hpp>

#include "ugsim/analysis.h"
#include "ugsim/errors.h"
#include "ugsim/prompt.h"
#include "ugsim/reference_data.h"
#include "ugsim/report.h"
#include "ugsim/run_config.h"
#include "ugsim/runner.h"
#include "ugsim/strings.h"

namespace ugsim {
namespace {

namespace fs = std::filesystem;

struct RunFlags {
  std::string config_path;
  std::string backend;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string run_id;
  std::optional<int> n_agents;
  std::vector<std::string> patterns;
  std::vector<double> temperatures;
  std::vector<std::string> sides;
  bool dry_run = false;
  bool force_cot_t2 = false;
  bool reproducible_timestamps = false;
};

struct AnalyzeFlags {
  std::string run_dir;
  std::string reference;
  std::string out;
  int breakpoint = 50;
  int bin_width = 5;
  std::string weighting = "by_count";
};

std::string join(const std::vector<std::string>& items, const char* sep) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : sep) + s;
  return out;
}

void apply_overrides(RunConfig& config, const RunFlags& f) {
  if (!f.backend.empty()) config.backend = f.backend;
  if (f.seed) config.seed = *f.seed;
  if (!f.out.empty()) config.output_dir = f.out;
  if (!f.run_id.empty()) config.run_id = f.run_id;
  if (f.n_agents) config.n_agents = *f.n_agents;
  if (f.force_cot_t2) config.force_cot_t2 = true;
  if (f.reproducible_timestamps) config.reproducible_timestamps = true;
  if (!f.patterns.empty()) {
    std::set<std::string> keep(f.patterns.begin(), f.patterns.end());
    for (const auto& label : keep) {
      if (std::none_of(config.patterns.begin(), config.patterns.end(),
                       [&](const auto& p) { return p.label == label; })) {
        throw ConfigError("--pattern " + label + " is not in the config");
      }
    }
    std::erase_if(config.patterns, [&](const auto& p) { return !keep.count(p.label); });
  }
  if (!f.temperatures.empty()) {
    for (auto& p : config.patterns) {
      std::erase_if(p.temperatures, [&](double t) {
        return std::find(f.temperatures.begin(), f.temperatures.end(), t) ==
               f.temperatures.end();
      });
    }
    std::erase_if(config.patterns, [](const auto& p) { return p.temperatures.empty(); });
    if (config.patterns.empty()) throw ConfigError("--temperature matches no cell");
  }
  if (!f.sides.empty()) {
    config.sides.clear();
    for (const auto& s : f.sides) config.sides.push_back(parse_side(s));
  }
}

void print_grid(const RunConfig& config, std::ostream& out) {
  auto cells = enumerate_cells(config);
  out << "cells (" << cells.size() << ", " << config.n_agents << " agents each):\n";
  for (const auto& c : cells) {
    out << "  " << c.name() << "  model=" << c.model_id
        << "  method=" << to_string(c.method) << '\n';
  }
}

void print_sample_prompts(const RunConfig& config, std::ostream& out) {
  PromptSetup prompts = load_prompt_setup(config);
  std::set<std::pair<PromptingMethod, Side>> shown;
  for (const auto& cell : enumerate_cells(config)) {
    if (!shown.insert({cell.method, cell.side}).second) continue;
    std::optional<int> offer;
    if (cell.side == Side::kResponder) {
      std::shared_ptr<const ReferenceDataset> reference;
      if (config.responder_offer_source == OfferSource::kReferenceDistribution) {
        reference = resolve_reference(config);
      }
      offer = draw_responder_offers(config.responder_offer_source, 1, reference.get(),
                                    config.fixed_offers, config.seed)
                  .front();
    }
    static const std::vector<Exemplar> kNone;
    const auto& exemplars = cell.method == PromptingMethod::kZeroShot ? kNone
                            : cell.side == Side::kProposer ? prompts.proposer_exemplars
                                                           : prompts.responder_exemplars;
    auto prompt = render_prompt(prompts.tmpl, cell.method, cell.side, exemplars, offer);
    out << "\n===== prompt: " << to_string(cell.method) << " / " << to_string(cell.side)
        << " =====\n"
        << prompt.text << '\n';
  }
}

int cmd_run(const RunFlags& f, std::ostream& out) {
  RunConfig config = load_run_config(f.config_path);
  apply_overrides(config, f);
  auto findings = validate_run_config(config);
  if (!findings.empty()) throw ConfigError(join(findings, "; "));
  if (f.dry_run) {
    out << "dry run: no backend calls are made\n"
        << "run_id=" << config.run_id << " backend=" << config.backend
        << " responder_offer_source=" << to_string(config.responder_offer_source) << '\n';
    print_grid(config, out);
    print_sample_prompts(config, out);
    return kExitOk;
  }
  RunOptions options;
  options.log = &out;
  RunManifest manifest = run(config, options);
  out << "run " << manifest.run_id << ": " << manifest.status << " ("
      << (config.output_dir / config.run_id).string() << ")\n";
  return manifest.complete() ? kExitOk : kExitRuntime;
}

int cmd_resume(const std::string& target, std::ostream& out) {
  fs::path manifest = target;
  if (fs::is_directory(manifest)) manifest /= "manifest.json";
  RunOptions options;
  options.log = &out;
  RunManifest m = resume(manifest, options);
  out << "run " << m.run_id << ": " << m.status << '\n';
  return m.complete() ? kExitOk : kExitRuntime;
}

ReferenceDataset analysis_reference(const AnalyzeFlags& f, const fs::path& run_dir) {
  if (!f.reference.empty()) return load_reference(f.reference);
  RunManifest m = read_manifest(run_dir / "manifest.json");
  return *resolve_reference(m.config);
}

AnalysisOptions analysis_options(const AnalyzeFlags& f) {
  return {f.bin_width, f.breakpoint, parse_weighting(f.weighting)};
}

int cmd_analyze(const AnalyzeFlags& f, std::ostream& out) {
  const fs::path run_dir = f.run_dir;
  auto cells = load_run_cells(run_dir);
  ReferenceDataset reference = analysis_reference(f, run_dir);
  auto options = analysis_options(f);
  std::ostringstream table;
  table << kComparisonHeader << '\n';
  for (const auto& cell : cells) {
    table << comparison_csv_row(compare_cell(cell, reference, options)) << '\n';
  }
  out << "reference: " << reference.provenance << '\n' << table.str();
  if (!f.out.empty()) {
    std::ofstream file(f.out, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot write " + f.out);
    file << table.str();
    if (!file) throw IoError("write failed for " + f.out);
  }
  return kExitOk;
}

int cmd_report(const AnalyzeFlags& f, std::ostream& out) {
  const fs::path run_dir = f.run_dir;
  auto cells = load_run_cells(run_dir);
  ReferenceDataset reference = analysis_reference(f, run_dir);
  const fs::path out_dir = f.out.empty() ? run_dir / "report" : fs::path(f.out);
  auto options = analysis_options(f);
  std::size_t files = 0;
  for (const auto& cell : cells) files += emit_report(cell, reference, out_dir, options).size();
  out << "wrote " << files << " files for " << cells.size() << " cells to "
      << out_dir.string() << '\n';
  return kExitOk;
}

int cmd_validate(const std::string& config_path, const std::string& template_path,
                 std::ostream& out, std::ostream& err) {
  RunConfig config = load_run_config(config_path);
  if (!template_path.empty()) config.template_path = template_path;
  bool ok = true;

  std::size_t per_side = 0;
  for (const auto& p : config.patterns) {
    std::vector<std::string> temps;
    for (double t : p.temperatures) temps.push_back(format_temperature(t));
    out << "pattern " << p.label << ": " << p.model_id << " " << to_string(p.method)
        << " temperatures " << join(temps, " ") << " (" << p.temperatures.size()
        << " cells per side)\n";
    per_side += p.temperatures.size();
  }
  std::vector<std::string> sides;
  for (Side s : config.sides) sides.emplace_back(to_string(s));
  out << config.patterns.size() << " patterns, " << per_side << " cells per side, "
      << per_side * config.sides.size() << " cells total (sides: " << join(sides, ", ")
      << "; " << config.n_agents << " agents per cell)\n";
  out << "responder offers: " << to_string(config.responder_offer_source) << '\n';

  auto diffs = compare_with_standard_grid(config.patterns);
  out << "matches standard grid: " << (diffs.empty() ? "yes" : "no") << '\n';
  for (const auto& d : diffs) out << "  note: " << d << '\n';

  for (const auto& finding : validate_run_config(config)) {
    err << "config: " << finding << '\n';
    ok = false;
  }
  try {
    PromptSetup prompts = load_prompt_setup(config);
    out << "template: ok (hash " << prompts.hash << ")\n";
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
    ok = false;
  }
  return ok ? kExitOk : kExitConfig;
}

int cmd_synth(std::uint64_t seed, int n, const std::string& out_path, std::ostream& out) {
  ReferenceDataset dataset = synthesize_reference(seed, n);
  if (out_path.empty()) {
    write_reference(dataset, out);
  } else {
    write_reference(dataset, fs::path(out_path));
    out << "wrote " << dataset.proposer_samples.size() << " proposer and "
        << dataset.responder_samples.size() << " responder samples to " << out_path << '\n';
  }
  return kExitOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ultimatum-game multi-agent simulator: run LLM or mock agents over a "
               "prompt/temperature grid and compare their decisions with reference data."};
  app.name("ugsim");
  app.require_subcommand(1);

  RunFlags run_flags;
  auto* run_cmd = app.add_subcommand("run", "Run the configured experiment grid");
  run_cmd->add_option("-c,--config", run_flags.config_path, "Run configuration file")
      ->required();
  run_cmd->add_option("--backend", run_flags.backend,
                      "http | mock:equilibrium | mock:empirical | mock:threshold[=N] | "
                      "mock:scripted=<file>");
  run_cmd->add_option("--seed", run_flags.seed, "RNG seed");
  run_cmd->add_option("--out", run_flags.out, "Output directory");
  run_cmd->add_option("--run-id", run_flags.run_id, "Run identifier");
  run_cmd->add_option("--n-agents", run_flags.n_agents, "Agents per cell");
  run_cmd->add_option("--pattern", run_flags.patterns, "Only these pattern labels")
      ->delimiter(',');
  run_cmd->add_option("--temperature", run_flags.temperatures, "Only these temperatures")
      ->delimiter(',');
  run_cmd->add_option("--side", run_flags.sides, "Only these sides")->delimiter(',');
  run_cmd->add_flag("--dry-run", run_flags.dry_run,
                    "Print the cell grid and sample prompts without calling a backend");
  run_cmd->add_flag("--force-cot-t2", run_flags.force_cot_t2,
                    "Allow chain-of-thought at temperature 2.0");
  run_cmd->add_flag("--reproducible-timestamps", run_flags.reproducible_timestamps,
                    "Omit wall-clock timestamps so reruns are byte-identical");

  std::string resume_target;
  auto* resume_cmd = app.add_subcommand("resume", "Finish an interrupted run");
  resume_cmd->add_option("run", resume_target, "Run directory or manifest.json")->required();

  AnalyzeFlags analyze_flags;
  auto add_analysis_flags = [](CLI::App* cmd, AnalyzeFlags& f) {
    cmd->add_option("--run", f.run_dir, "Run directory")->required();
    cmd->add_option("--reference", f.reference, "Reference CSV (default: the run's)");
    cmd->add_option("--breakpoint", f.breakpoint, "Regression breakpoint in coins");
    cmd->add_option("--bin-width", f.bin_width, "Histogram bin width in coins");
    cmd->add_option("--weighting", f.weighting, "by_count | unweighted");
  };
  auto* analyze_cmd = app.add_subcommand("analyze", "Compare a run with the reference data");
  add_analysis_flags(analyze_cmd, analyze_flags);
  analyze_cmd->add_option("--out", analyze_flags.out, "Also write the table to this CSV");

  AnalyzeFlags report_flags;
  auto* report_cmd = app.add_subcommand("report", "Write per-cell CSV and SVG files");
  add_analysis_flags(report_cmd, report_flags);
  report_cmd->add_option("--out", report_flags.out, "Output directory (default <run>/report)");

  std::string validate_config, validate_template;
  auto* validate_cmd = app.add_subcommand("validate", "Check a run configuration");
  validate_cmd->add_option("-c,--config", validate_config, "Run configuration file")
      ->required();
  validate_cmd->add_option("--template", validate_template, "Prompt template to check");

  std::uint64_t synth_seed = 7;
  int synth_n = 1000;
  std::string synth_out;
  auto* synth_cmd =
      app.add_subcommand("synth-reference", "Generate the synthetic reference dataset");
  synth_cmd->add_option("--seed", synth_seed, "RNG seed");
  synth_cmd->add_option("--n", synth_n, "Samples per side");
  synth_cmd->add_option("--out", synth_out, "Output CSV (default stdout)");

  std::vector<std::string> argv_store = {"ugsim"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitConfig;
  }

  try {
    if (*run_cmd) return cmd_run(run_flags, out);
    if (*resume_cmd) return cmd_resume(resume_target, out);
    if (*analyze_cmd) return cmd_analyze(analyze_flags, out);
    if (*report_cmd) return cmd_report(report_flags, out);
    if (*validate_cmd) return cmd_validate(validate_config, validate_template, out, err);
    if (*synth_cmd) return cmd_synth(synth_seed, synth_n, synth_out, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const PromptError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const AnalysisError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitConfig;
}

}  // namespace ugsim
