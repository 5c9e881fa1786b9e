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
#include <map>
#include <sstream>

#include "gtest/gtest.h"
#include "test_util.h"
#include "ugsim/errors.h"

namespace ugsim {
namespace {

ReferenceDataset parse(const std::string& text) {
  std::istringstream in(text);
  return parse_reference(in, "test.csv");
}

TEST(LoadReferenceTest, MapsRows) {
  auto d = parse("kind,offer,accepted\nproposer,50\nresponder,30,1\nresponder,10,0\n");
  ASSERT_EQ(d.proposer_samples.size(), 1u);
  EXPECT_EQ(d.proposer_samples[0].offer, 50);
  ASSERT_EQ(d.responder_samples.size(), 2u);
  EXPECT_EQ(d.responder_samples[0], (ResponderSample{30, true}));
  EXPECT_EQ(d.responder_samples[1], (ResponderSample{10, false}));
  EXPECT_EQ(d.provenance, "test.csv");
}

TEST(LoadReferenceTest, OutOfRangeOfferNamesRowAndField) {
  try {
    parse("kind,offer,accepted\nproposer,50,\nresponder,130,1\n");
    FAIL() << "expected LoadError";
  } catch (const LoadError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("offer"), std::string::npos);
  }
}

TEST(LoadReferenceTest, MalformedRows) {
  EXPECT_THROW(parse("kind,offer,accepted\nresponder,30\n"), LoadError);
  EXPECT_THROW(parse("kind,offer,accepted\nresponder,30,2\n"), LoadError);
  EXPECT_THROW(parse("kind,offer,accepted\nbuyer,30,1\n"), LoadError);
  EXPECT_THROW(parse("kind,offer,accepted\nproposer,abc\n"), LoadError);
  EXPECT_THROW(parse("proposer,30\n"), LoadError);
  EXPECT_THROW(load_reference("/nonexistent/ref.csv"), IoError);
}

TEST(LoadReferenceTest, RoundTripsThroughFile) {
  testing::TempDir dir;
  auto d = synthesize_reference(11, 200);
  write_reference(d, dir / "ref.csv");
  auto back = load_reference(dir / "ref.csv");
  EXPECT_EQ(back.proposer_samples, d.proposer_samples);
  EXPECT_EQ(back.responder_samples, d.responder_samples);
  EXPECT_EQ(back.provenance, d.provenance);
}

TEST(SynthesizeReferenceTest, RejectsSmallN) {
  EXPECT_THROW(synthesize_reference(7, 99), ConfigError);
}

TEST(SynthesizeReferenceTest, SameSeedIsByteIdentical) {
  std::ostringstream a, b;
  write_reference(synthesize_reference(7, 1000), a);
  write_reference(synthesize_reference(7, 1000), b);
  EXPECT_EQ(a.str(), b.str());
  std::ostringstream c;
  write_reference(synthesize_reference(8, 1000), c);
  EXPECT_NE(a.str(), c.str());
}

TEST(SynthesizeReferenceTest, Seed7ModeIsFifty) {
  auto d = synthesize_reference(7, 1000);
  std::map<int, int> counts;
  for (const auto& s : d.proposer_samples) ++counts[s.offer];
  auto mode = std::max_element(counts.begin(), counts.end(), [](auto& a, auto& b) {
    return a.second < b.second;
  });
  EXPECT_EQ(mode->first, 50);
}

TEST(SynthesizeReferenceTest, Seed7AcceptanceJumpsAtFifty) {
  auto d = synthesize_reference(7, 1000);
  std::map<int, std::pair<int, int>> tally;
  for (const auto& s : d.responder_samples) {
    tally[s.offer].first += s.accepted;
    ++tally[s.offer].second;
  }
  double at50 = double(tally[50].first) / tally[50].second;
  double at45 = double(tally[45].first) / tally[45].second;
  EXPECT_GT(at50 - at45, 0.15);
}

// Generator contract, checked by counting across many seeds.
TEST(SynthesizeReferenceTest, ProposerMassContractHoldsAcrossSeeds) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto d = synthesize_reference(seed, 1000);
    int mid = 0, high = 0;
    for (const auto& s : d.proposer_samples) {
      mid += s.offer >= 40 && s.offer <= 50;
      high += s.offer > 60;
    }
    EXPECT_GT(mid, 500) << "seed " << seed;
    EXPECT_LT(high, 50) << "seed " << seed;
  }
}

TEST(SynthesizeReferenceTest, AcceptanceProbabilityShape) {
  EXPECT_DOUBLE_EQ(synthetic_acceptance_probability(0), 0.1);
  EXPECT_DOUBLE_EQ(synthetic_acceptance_probability(45), 0.1 + 0.012 * 45);
  EXPECT_DOUBLE_EQ(synthetic_acceptance_probability(50), 0.9);
  EXPECT_DOUBLE_EQ(synthetic_acceptance_probability(100), 0.9);
}

TEST(SynthesizeReferenceTest, BundledDatasetMatchesGenerator) {
  auto shipped = load_reference(testing::source_path("data/synthetic_reference.csv"));
  auto fresh = synthesize_reference(7, 1000);
  EXPECT_EQ(shipped.proposer_samples, fresh.proposer_samples);
  EXPECT_EQ(shipped.responder_samples, fresh.responder_samples);
}

}  // namespace
}  // namespace ugsim
