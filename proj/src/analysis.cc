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

#include "ugsim/analysis.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "ugsim/errors.h"

namespace ugsim {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct WeightedPoint {
  double x;
  double y;
  double w;
};

SegmentFit fit_segment(const std::vector<WeightedPoint>& pts) {
  SegmentFit seg;
  seg.n_points = static_cast<int>(pts.size());
  for (const auto& p : pts) seg.total_weight += p.w;
  if (pts.empty()) {
    seg.degenerate = true;
    seg.intercept = kNaN;
    return seg;
  }
  double xw = 0, yw = 0;
  for (const auto& p : pts) {
    xw += p.w * p.x;
    yw += p.w * p.y;
  }
  const double x_mean = xw / seg.total_weight;
  const double y_mean = yw / seg.total_weight;
  seg.x_mean = x_mean;
  if (pts.size() < 2) {
    seg.degenerate = true;
    seg.intercept = y_mean;
    return seg;
  }
  double sxx = 0, sxy = 0;
  for (const auto& p : pts) {
    sxx += p.w * (p.x - x_mean) * (p.x - x_mean);
    sxy += p.w * (p.x - x_mean) * (p.y - y_mean);
  }
  seg.sxx = sxx;
  seg.slope = sxy / sxx;
  seg.intercept = y_mean - seg.slope * x_mean;
  seg.dof = seg.n_points - 2;
  if (seg.dof > 0) {
    double ssr = 0;
    for (const auto& p : pts) {
      double r = p.y - seg.value(p.x);
      ssr += p.w * r * r;
    }
    seg.residual_variance = ssr / seg.dof;
  } else {
    seg.residual_variance = kNaN;
  }
  return seg;
}

std::vector<BandPoint> evaluate_band(const SegmentFit& seg, int from, int to, int step) {
  std::vector<BandPoint> out;
  for (int x = from; x <= to; x += step) {
    double fitted = seg.value(x);
    double half = band_half_width(seg, x);
    out.push_back({static_cast<double>(x), fitted, fitted - half, fitted + half});
  }
  if (out.empty() || out.back().x != to) {
    double fitted = seg.value(to);
    double half = band_half_width(seg, to);
    out.push_back({static_cast<double>(to), fitted, fitted - half, fitted + half});
  }
  return out;
}

}  // namespace

std::size_t Histogram::bin_of(int offer) const {
  std::size_t bin = static_cast<std::size_t>(offer / bin_width);
  return std::min(bin, counts.size() - 1);
}

Histogram normalized_histogram(std::span<const int> offers, int bin_width,
                               int max_value) {
  if (offers.empty()) throw AnalysisError("histogram of an empty sample");
  if (bin_width <= 0 || max_value <= 0 || max_value % bin_width != 0) {
    throw AnalysisError("bin width " + std::to_string(bin_width) + " does not divide " +
                        std::to_string(max_value));
  }
  Histogram h;
  h.bin_width = bin_width;
  h.max_value = max_value;
  const int bins = max_value / bin_width;
  h.counts.assign(bins, 0);
  for (int k = 0; k < bins; ++k) h.bin_starts.push_back(k * bin_width);
  for (int offer : offers) {
    if (offer < 0 || offer > max_value) {
      throw AnalysisError("offer " + std::to_string(offer) + " outside [0, " +
                          std::to_string(max_value) + "]");
    }
    ++h.counts[h.bin_of(offer)];
  }
  h.total = static_cast<std::int64_t>(offers.size());
  for (auto c : h.counts) {
    h.frequencies.push_back(static_cast<double>(c) / static_cast<double>(h.total));
  }
  return h;
}

AcceptanceCurve acceptance_curve(std::span<const ResponderSample> samples) {
  if (samples.empty()) throw AnalysisError("acceptance curve of an empty sample");
  std::map<int, std::pair<int, int>> tally;
  for (const auto& s : samples) {
    auto& [accepted, total] = tally[s.offer];
    accepted += s.accepted ? 1 : 0;
    ++total;
  }
  AcceptanceCurve curve;
  for (const auto& [offer, at] : tally) {
    curve.points.push_back(
        {offer, at.first, at.second, static_cast<double>(at.first) / at.second});
  }
  return curve;
}

std::string_view to_string(Weighting w) {
  return w == Weighting::kByCount ? "by_count" : "unweighted";
}

Weighting parse_weighting(std::string_view text) {
  if (text == "by_count" || text == "ByCount") return Weighting::kByCount;
  if (text == "unweighted" || text == "Unweighted") return Weighting::kUnweighted;
  throw ConfigError("unknown weighting '" + std::string(text) + "'");
}

double band_half_width(const SegmentFit& seg, double x) {
  if (seg.degenerate || seg.dof <= 0) return kNaN;
  boost::math::students_t dist(seg.dof);
  double t = boost::math::quantile(
      boost::math::complement(dist, (1.0 - kConfidenceLevel) / 2.0));
  double var = seg.residual_variance *
               (1.0 / seg.total_weight + (x - seg.x_mean) * (x - seg.x_mean) / seg.sxx);
  return t * std::sqrt(var);
}

PiecewiseFit piecewise_fit(const AcceptanceCurve& curve, int breakpoint,
                           Weighting weighting, int grid_step, int max_value) {
  if (breakpoint <= 0 || breakpoint >= max_value) {
    throw AnalysisError("breakpoint must lie strictly inside (0, " +
                        std::to_string(max_value) + ")");
  }
  if (grid_step <= 0) throw AnalysisError("grid step must be positive");
  std::vector<WeightedPoint> left, right;
  for (const auto& p : curve.points) {
    double w = weighting == Weighting::kByCount ? p.count : 1.0;
    (p.offer < breakpoint ? left : right).push_back({double(p.offer), p.rate, w});
  }
  PiecewiseFit fit;
  fit.breakpoint = breakpoint;
  fit.weighting = weighting;
  fit.left = fit_segment(left);
  fit.right = fit_segment(right);
  fit.left_band = evaluate_band(fit.left, 0, breakpoint, grid_step);
  fit.right_band = evaluate_band(fit.right, breakpoint, max_value, grid_step);
  fit.jump = fit.right.value(breakpoint) - fit.left.value(breakpoint);
  return fit;
}

double tv_distance(const Histogram& a, const Histogram& b) {
  if (a.bin_width != b.bin_width || a.max_value != b.max_value ||
      a.frequencies.size() != b.frequencies.size()) {
    throw AnalysisError("histograms have different binning");
  }
  double sum = 0;
  for (std::size_t i = 0; i < a.frequencies.size(); ++i) {
    sum += std::abs(a.frequencies[i] - b.frequencies[i]);
  }
  return std::clamp(0.5 * sum, 0.0, 1.0);
}

double mean(std::span<const int> values) {
  if (values.empty()) return kNaN;
  double s = std::accumulate(values.begin(), values.end(), 0.0);
  return s / static_cast<double>(values.size());
}

EquilibriumGap equilibrium_gap(std::span<const int> proposer_offers,
                               std::span<const ResponderSample> responder_samples) {
  if (proposer_offers.empty() && responder_samples.empty()) {
    throw AnalysisError("equilibrium gap needs at least one side");
  }
  EquilibriumGap gap;
  if (!proposer_offers.empty()) gap.mean_offer = mean(proposer_offers);
  if (!responder_samples.empty()) {
    auto rejected = std::count_if(responder_samples.begin(), responder_samples.end(),
                                  [](const auto& s) { return !s.accepted; });
    gap.rejection_rate =
        static_cast<double>(rejected) / static_cast<double>(responder_samples.size());
  }
  return gap;
}

}  // namespace ugsim
