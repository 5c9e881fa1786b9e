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

#ifndef UGSIM_REPORT_H_
#define UGSIM_REPORT_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ugsim/analysis.h"
#include "ugsim/prompt.h"
#include "ugsim/reference_data.h"

namespace ugsim {

// Successful decisions of one (pattern, temperature) pair, both sides.
struct CellData {
  std::string run_id;
  std::string pattern_label;
  std::string model_id;
  PromptingMethod method = PromptingMethod::kZeroShot;
  double temperature = 0;
  std::vector<int> proposer_offers;
  std::vector<ResponderSample> responder_samples;

  // `<run_id>_<pattern>_<temperature>`
  std::string stem() const;
  bool empty() const { return proposer_offers.empty() && responder_samples.empty(); }
};

struct ComparisonReport {
  std::string run_id;
  std::string pattern_label;
  std::string model_id;
  PromptingMethod method = PromptingMethod::kZeroShot;
  double temperature = 0;
  std::size_t n_proposer = 0;
  std::size_t n_responder = 0;
  std::optional<double> tv_distance;          // simulated vs reference offers
  std::optional<double> mean_offer;
  double reference_mean_offer = 0;
  std::optional<double> mean_offer_gap;       // simulated minus reference
  EquilibriumGap equilibrium;
  std::optional<double> jump;
  std::optional<double> reference_jump;
};

struct AnalysisOptions {
  int bin_width = 5;
  int breakpoint = 50;
  Weighting weighting = Weighting::kByCount;
};

ComparisonReport compare_cell(const CellData& cell, const ReferenceDataset& reference,
                              const AnalysisOptions& options = {});

// Groups the successful records of a run directory by (pattern, temperature)
// in manifest order. Throws ConfigError when the directory holds no run or no
// successful records.
std::vector<CellData> load_run_cells(const std::filesystem::path& run_dir);

// Per cell: <stem>_proposer_histogram.csv, <stem>_responder_acceptance.csv,
// <stem>_responder_fit.csv, <stem>_comparison.csv and the SVGs
// <stem>_proposer_histogram.svg, <stem>_responder_fit.svg,
// <stem>_responder_bubbles.svg. Files for a missing side are skipped.
// Throws AnalysisError for an empty cell, IoError when writing fails.
std::vector<std::filesystem::path> emit_report(const CellData& cell,
                                               const ReferenceDataset& reference,
                                               const std::filesystem::path& out_dir,
                                               const AnalysisOptions& options = {});

inline constexpr std::string_view kComparisonHeader =
    "run_id,pattern,model_id,method,temperature,n_proposer,n_responder,tv_distance,"
    "mean_offer,reference_mean_offer,mean_offer_gap,equilibrium_mean_offer,"
    "rejection_rate,jump,reference_jump";

std::string comparison_csv_row(const ComparisonReport& report);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;
};

// Plain comma-separated files as written by this module (no quoting).
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace ugsim

#endif  // UGSIM_REPORT_H_
