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

#include "ugsim/reference_data.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <utility>

#include "ugsim/errors.h"
#include "ugsim/random.h"
#include "ugsim/strings.h"

namespace ugsim {
namespace {

constexpr std::string_view kHeader = "kind,offer,accepted";
constexpr std::string_view kProvenancePrefix = "# provenance:";

// Synthetic proposer distribution, in parts per thousand.
constexpr std::array<std::pair<int, int>, 16> kProposerWeights = {{
    {0, 30}, {5, 10}, {10, 30}, {15, 10}, {20, 40}, {25, 30},
    {30, 70}, {35, 40}, {40, 170}, {45, 90}, {50, 400}, {55, 30},
    {60, 30}, {70, 8}, {80, 6}, {100, 6},
}};

int draw_synthetic_offer(Rng& rng) {
  auto ticket = static_cast<int>(rng.uniform_index(1000));
  for (const auto& [offer, weight] : kProposerWeights) {
    if (ticket < weight) return offer;
    ticket -= weight;
  }
  return kProposerWeights.back().first;
}

int parse_offer(std::string_view field, const std::string& name,
                std::size_t line) {
  int value = 0;
  auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() ||
      ptr != field.data() + field.size()) {
    throw LoadError(name, line,
                    "field 'offer': not an integer: '" + std::string(field) +
                        "'");
  }
  if (value < 0 || value > kMaxOffer) {
    throw LoadError(name, line,
                    "field 'offer': " + std::to_string(value) +
                        " outside [0, " + std::to_string(kMaxOffer) + "]");
  }
  return value;
}

}  // namespace

std::vector<int> ReferenceDataset::proposer_offers() const {
  std::vector<int> out;
  out.reserve(proposer_samples.size());
  for (const auto& s : proposer_samples) out.push_back(s.offer);
  return out;
}

ReferenceDataset parse_reference(std::istream& in, const std::string& name) {
  ReferenceDataset dataset;
  std::string raw;
  std::size_t line = 0;
  bool seen_header = false;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text = trim(raw);
    if (text.empty()) continue;
    if (!seen_header) {
      if (text.starts_with(kProvenancePrefix)) {
        dataset.provenance =
            std::string(trim(text.substr(kProvenancePrefix.size())));
        continue;
      }
      if (text != kHeader) {
        throw LoadError(name, line,
                        "expected header '" + std::string(kHeader) + "'");
      }
      seen_header = true;
      continue;
    }
    auto fields = split(text, ',');
    for (auto& f : fields) f = trim(f);
    if (fields.size() < 2 || fields.size() > 3) {
      throw LoadError(name, line,
                      "expected 2 or 3 fields, got " +
                          std::to_string(fields.size()));
    }
    if (fields[0] == "proposer") {
      if (fields.size() == 3 && !fields[2].empty()) {
        throw LoadError(name, line,
                        "field 'accepted': must be empty for proposer rows");
      }
      dataset.proposer_samples.push_back({parse_offer(fields[1], name, line)});
    } else if (fields[0] == "responder") {
      int offer = parse_offer(fields[1], name, line);
      if (fields.size() != 3 || (fields[2] != "0" && fields[2] != "1")) {
        throw LoadError(name, line, "field 'accepted': expected 0 or 1");
      }
      dataset.responder_samples.push_back({offer, fields[2] == "1"});
    } else {
      throw LoadError(name, line,
                      "field 'kind': expected proposer or responder, got '" +
                          std::string(fields[0]) + "'");
    }
  }
  if (!seen_header) throw LoadError(name, line, "missing header row");
  if (dataset.provenance.empty()) dataset.provenance = name;
  return dataset;
}

ReferenceDataset load_reference(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open reference data " + path.string());
  return parse_reference(in, path.string());
}

void write_reference(const ReferenceDataset& dataset, std::ostream& out) {
  if (!dataset.provenance.empty()) {
    out << kProvenancePrefix << ' ' << dataset.provenance << '\n';
  }
  out << kHeader << '\n';
  for (const auto& s : dataset.proposer_samples) {
    out << "proposer," << s.offer << ",\n";
  }
  for (const auto& s : dataset.responder_samples) {
    out << "responder," << s.offer << ',' << (s.accepted ? 1 : 0) << '\n';
  }
}

void write_reference(const ReferenceDataset& dataset,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_reference(dataset, out);
  if (!out) throw IoError("write failed for " + path.string());
}

double synthetic_acceptance_probability(int offer) {
  if (offer >= 50) return 0.9;
  return std::clamp(0.1 + 0.012 * offer, 0.0, 1.0);
}

ReferenceDataset synthesize_reference(std::uint64_t seed, int n) {
  if (n < 100) {
    throw ConfigError("synthetic reference needs n >= 100, got " +
                      std::to_string(n));
  }
  ReferenceDataset dataset;
  std::ostringstream label;
  label << "synthetic(seed=" << seed << ",n=" << n << ")";
  dataset.provenance = label.str();

  Rng proposer_rng(derive_seed(seed, {1}));
  dataset.proposer_samples.reserve(n);
  for (int i = 0; i < n; ++i) {
    dataset.proposer_samples.push_back({draw_synthetic_offer(proposer_rng)});
  }
  Rng responder_rng(derive_seed(seed, {2}));
  dataset.responder_samples.reserve(n);
  for (int i = 0; i < n; ++i) {
    int offer = draw_synthetic_offer(responder_rng);
    bool accepted =
        responder_rng.bernoulli(synthetic_acceptance_probability(offer));
    dataset.responder_samples.push_back({offer, accepted});
  }
  return dataset;
}

}  // namespace ugsim
