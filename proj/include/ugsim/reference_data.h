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

#ifndef UGSIM_REFERENCE_DATA_H_
#define UGSIM_REFERENCE_DATA_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace ugsim {

inline constexpr int kMaxOffer = 100;

struct ProposerSample {
  int offer = 0;
  friend bool operator==(const ProposerSample&, const ProposerSample&) = default;
};

struct ResponderSample {
  int offer = 0;
  bool accepted = false;
  friend bool operator==(const ResponderSample&,
                         const ResponderSample&) = default;
};

// Empirical ultimatum-game data: proposer offers and responder
// (offer, accepted) pairs.
struct ReferenceDataset {
  std::vector<ProposerSample> proposer_samples;
  std::vector<ResponderSample> responder_samples;
  std::string provenance;

  std::vector<int> proposer_offers() const;
};

// CSV with header `kind,offer,accepted`; kind is `proposer` or `responder`,
// accepted is 0/1 and only present for responder rows. An optional first
// line `# provenance: <label>` names the source.
//
// Throws LoadError naming the line and field on malformed or out-of-range
// rows, IoError if the file cannot be opened.
ReferenceDataset load_reference(const std::filesystem::path& path);
ReferenceDataset parse_reference(std::istream& in, const std::string& name);

void write_reference(const ReferenceDataset& dataset, std::ostream& out);
void write_reference(const ReferenceDataset& dataset,
                     const std::filesystem::path& path);

// Stand-in for the real classroom data. Proposer offers follow a fixed
// distribution with mode 50, 66% of mass on [40, 50] and 2% above 60.
// Responders see offers from the same distribution and accept with
// probability clamp(0.1 + 0.012 * offer, 0, 1) below 50 and 0.9 from 50 up.
// Generates n samples per side. Throws ConfigError when n < 100.
ReferenceDataset synthesize_reference(std::uint64_t seed, int n);

// Generator acceptance probability, exposed for tests.
double synthetic_acceptance_probability(int offer);

}  // namespace ugsim

#endif  // UGSIM_REFERENCE_DATA_H_
