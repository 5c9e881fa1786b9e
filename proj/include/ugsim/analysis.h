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

#ifndef UGSIM_ANALYSIS_H_
#define UGSIM_ANALYSIS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ugsim/reference_data.h"

namespace ugsim {

class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bins [k*w, (k+1)*w), the last one closed at max_value.
struct Histogram {
  int bin_width = 5;
  int max_value = 100;
  std::vector<int> bin_starts;
  std::vector<std::int64_t> counts;
  std::vector<double> frequencies;
  std::int64_t total = 0;

  std::size_t bin_of(int offer) const;
};

// Throws AnalysisError on empty input, offers outside [0, max_value], or a
// bin width that does not divide max_value.
Histogram normalized_histogram(std::span<const int> offers, int bin_width = 5,
                               int max_value = kMaxOffer);

struct AcceptancePoint {
  int offer = 0;
  int accepted = 0;
  int count = 0;
  double rate = 0;  // accepted / count
};

// One point per distinct offer, ascending.
struct AcceptanceCurve {
  std::vector<AcceptancePoint> points;
};

AcceptanceCurve acceptance_curve(std::span<const ResponderSample> samples);

enum class Weighting { kByCount, kUnweighted };
std::string_view to_string(Weighting w);
Weighting parse_weighting(std::string_view text);

struct SegmentFit {
  double slope = 0;
  double intercept = 0;
  int n_points = 0;       // distinct offers in the segment
  double total_weight = 0;
  int dof = 0;            // n_points - 2
  double residual_variance = 0;
  double x_mean = 0;      // weighted
  double sxx = 0;         // weighted sum of squared deviations of x
  bool degenerate = false;  // fewer than two distinct offers: flat at the mean

  double value(double x) const { return intercept + slope * x; }
};

struct BandPoint {
  double x = 0;
  double fitted = 0;
  double lower = 0;  // NaN when the band is undefined
  double upper = 0;
};

inline constexpr double kConfidenceLevel = 0.95;
inline constexpr std::string_view kCiMethod = "ols_t_95";

// Two independent least-squares lines, left on offers < breakpoint and right
// on offers >= breakpoint. Fitted values are never clamped to [0, 1].
struct PiecewiseFit {
  int breakpoint = 50;
  Weighting weighting = Weighting::kByCount;
  SegmentFit left;
  SegmentFit right;
  std::vector<BandPoint> left_band;   // x in [0, breakpoint]
  std::vector<BandPoint> right_band;  // x in [breakpoint, max_value]
  double jump = 0;  // right(breakpoint) - left(breakpoint); NaN if a side is empty
};

// Half-width of the pointwise confidence band of a segment at x; NaN when the
// segment has no residual degrees of freedom.
double band_half_width(const SegmentFit& seg, double x);

PiecewiseFit piecewise_fit(const AcceptanceCurve& curve, int breakpoint = 50,
                           Weighting weighting = Weighting::kByCount,
                           int grid_step = 1, int max_value = kMaxOffer);

// 0.5 * sum |f1 - f2|. Throws AnalysisError when the binning differs.
double tv_distance(const Histogram& a, const Histogram& b);

struct EquilibriumGap {
  std::optional<double> mean_offer;      // distance from the offer 0
  std::optional<double> rejection_rate;  // distance from always accepting
};

// Throws AnalysisError when both inputs are empty.
EquilibriumGap equilibrium_gap(std::span<const int> proposer_offers,
                               std::span<const ResponderSample> responder_samples);

double mean(std::span<const int> values);

}  // namespace ugsim

#endif  // UGSIM_ANALYSIS_H_
