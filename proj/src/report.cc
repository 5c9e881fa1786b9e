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

#include "ugsim/report.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "ugsim/errors.h"
#include "ugsim/runner.h"
#include "ugsim/strings.h"
#include "ugsim/transcript.h"

namespace ugsim {
namespace {

namespace fs = std::filesystem;

std::string opt(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.close();
  if (!out) throw IoError("write failed for " + path.string());
}

// Minimal SVG plot over offers [0, 100] on the x axis.
class Plot {
 public:
  Plot(std::string title, std::string y_label, double y_min, double y_max)
      : y_min_(y_min), y_max_(y_max) {
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
         << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
         << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
         << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
         << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" "
            "font-size=\"14\">"
         << title << "</text>\n";
    axes(y_label);
  }

  double sx(double x) const { return kLeft + (kWidth - kLeft - kRight) * x / 100.0; }
  double sy(double y) const {
    return kHeight - kBottom - (kHeight - kTop - kBottom) * (y - y_min_) / (y_max_ - y_min_);
  }

  void rect(double x0, double x1, double y, const std::string& style) {
    out_ << "<rect x=\"" << sx(x0) << "\" y=\"" << sy(y) << "\" width=\""
         << sx(x1) - sx(x0) << "\" height=\"" << sy(std::max(0.0, y_min_)) - sy(y)
         << "\" " << style << "/>\n";
  }

  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& style) {
    out_ << "<polyline fill=\"none\" " << style << " points=\"";
    for (const auto& [x, y] : pts) out_ << sx(x) << ',' << sy(y) << ' ';
    out_ << "\"/>\n";
  }

  void polygon(const std::vector<std::pair<double, double>>& pts, const std::string& style) {
    out_ << "<polygon " << style << " points=\"";
    for (const auto& [x, y] : pts) out_ << sx(x) << ',' << sy(y) << ' ';
    out_ << "\"/>\n";
  }

  void circle(double x, double y, double r, const std::string& style) {
    out_ << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\" r=\"" << r << "\" "
         << style << "/>\n";
  }

  void legend(int row, const std::string& color, const std::string& label) {
    double y = kTop + 14 * row;
    out_ << "<rect x=\"" << kWidth - kRight - 150 << "\" y=\"" << y - 9
         << "\" width=\"10\" height=\"10\" fill=\"" << color << "\"/>\n"
         << "<text x=\"" << kWidth - kRight - 135 << "\" y=\"" << y << "\">" << label
         << "</text>\n";
  }

  std::string str() { return out_.str() + "</svg>\n"; }

 private:
  static constexpr double kWidth = 640, kHeight = 400;
  static constexpr double kLeft = 60, kRight = 20, kTop = 35, kBottom = 45;

  void axes(const std::string& y_label) {
    out_ << "<g stroke=\"black\">\n<line x1=\"" << sx(0) << "\" y1=\"" << sy(y_min_)
         << "\" x2=\"" << sx(100) << "\" y2=\"" << sy(y_min_) << "\"/>\n<line x1=\""
         << sx(0) << "\" y1=\"" << sy(y_min_) << "\" x2=\"" << sx(0) << "\" y2=\""
         << sy(y_max_) << "\"/>\n</g>\n";
    for (int x = 0; x <= 100; x += 10) {
      out_ << "<text x=\"" << sx(x) << "\" y=\"" << sy(y_min_) + 16
           << "\" text-anchor=\"middle\">" << x << "</text>\n";
    }
    const double span = y_max_ - y_min_;
    const double step = span > 2 ? 0.5 : span > 0.6 ? 0.2 : 0.1;
    for (double y = std::ceil(y_min_ / step) * step; y <= y_max_ + 1e-9; y += step) {
      out_ << "<text x=\"" << sx(0) - 6 << "\" y=\"" << sy(y) + 4
           << "\" text-anchor=\"end\">" << format_double(std::round(y * 100) / 100)
           << "</text>\n";
    }
    if (y_min_ < 0 || y_max_ > 1) {
      for (double level : {0.0, 1.0}) {
        out_ << "<line x1=\"" << sx(0) << "\" y1=\"" << sy(level) << "\" x2=\"" << sx(100)
             << "\" y2=\"" << sy(level) << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
      }
    }
    out_ << "<text x=\"" << sx(50) << "\" y=\"" << kHeight - 8
         << "\" text-anchor=\"middle\">offer (coins)</text>\n"
         << "<text x=\"14\" y=\"" << sy((y_min_ + y_max_) / 2)
         << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
         << sy((y_min_ + y_max_) / 2) << ")\">" << y_label << "</text>\n";
  }

  double y_min_, y_max_;
  std::ostringstream out_;
};

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  finish(out, path);
}

void band_shapes(Plot& plot, const PiecewiseFit& fit, const std::string& color) {
  for (const auto* band : {&fit.left_band, &fit.right_band}) {
    if (band->empty()) continue;
    if (!std::isnan(band->front().lower)) {
      std::vector<std::pair<double, double>> poly;
      for (const auto& p : *band) poly.emplace_back(p.x, p.upper);
      for (auto it = band->rbegin(); it != band->rend(); ++it) poly.emplace_back(it->x, it->lower);
      plot.polygon(poly, "fill=\"" + color + "\" fill-opacity=\"0.2\" stroke=\"none\"");
    }
    if (!std::isnan(band->front().fitted)) {
      std::vector<std::pair<double, double>> line;
      for (const auto& p : *band) line.emplace_back(p.x, p.fitted);
      plot.polyline(line, "stroke=\"" + color + "\" stroke-width=\"2\"");
    }
  }
}

std::pair<double, double> fit_range(std::initializer_list<const PiecewiseFit*> fits) {
  double lo = 0, hi = 1;
  for (const auto* fit : fits) {
    for (const auto* band : {&fit->left_band, &fit->right_band}) {
      for (const auto& p : *band) {
        for (double v : {p.fitted, p.lower, p.upper}) {
          if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
          }
        }
      }
    }
  }
  return {std::floor(lo * 10) / 10 - 0.05, std::ceil(hi * 10) / 10 + 0.05};
}

}  // namespace

std::string CellData::stem() const {
  return run_id + "_" + pattern_label + "_" + format_temperature(temperature);
}

ComparisonReport compare_cell(const CellData& cell, const ReferenceDataset& reference,
                              const AnalysisOptions& options) {
  if (cell.empty()) throw AnalysisError("cell " + cell.stem() + " has no decisions");
  ComparisonReport r;
  r.run_id = cell.run_id;
  r.pattern_label = cell.pattern_label;
  r.model_id = cell.model_id;
  r.method = cell.method;
  r.temperature = cell.temperature;
  r.n_proposer = cell.proposer_offers.size();
  r.n_responder = cell.responder_samples.size();
  const auto ref_offers = reference.proposer_offers();
  r.reference_mean_offer = mean(ref_offers);
  if (!cell.proposer_offers.empty()) {
    auto sim = normalized_histogram(cell.proposer_offers, options.bin_width);
    auto ref = normalized_histogram(ref_offers, options.bin_width);
    r.tv_distance = tv_distance(sim, ref);
    r.mean_offer = mean(cell.proposer_offers);
    r.mean_offer_gap = *r.mean_offer - r.reference_mean_offer;
  }
  r.equilibrium = equilibrium_gap(cell.proposer_offers, cell.responder_samples);
  if (!cell.responder_samples.empty()) {
    r.jump = piecewise_fit(acceptance_curve(cell.responder_samples), options.breakpoint,
                           options.weighting)
                 .jump;
  }
  if (!reference.responder_samples.empty()) {
    r.reference_jump = piecewise_fit(acceptance_curve(reference.responder_samples),
                                     options.breakpoint, options.weighting)
                           .jump;
  }
  return r;
}

std::string comparison_csv_row(const ComparisonReport& r) {
  std::ostringstream out;
  out << r.run_id << ',' << r.pattern_label << ',' << r.model_id << ','
      << to_string(r.method) << ',' << format_temperature(r.temperature) << ','
      << r.n_proposer << ',' << r.n_responder << ',' << opt(r.tv_distance) << ','
      << opt(r.mean_offer) << ',' << format_double(r.reference_mean_offer) << ','
      << opt(r.mean_offer_gap) << ',' << opt(r.equilibrium.mean_offer) << ','
      << opt(r.equilibrium.rejection_rate) << ',' << opt(r.jump) << ','
      << opt(r.reference_jump);
  return out.str();
}

std::vector<CellData> load_run_cells(const fs::path& run_dir) {
  const fs::path manifest_path = run_dir / "manifest.json";
  if (!fs::exists(manifest_path)) {
    throw ConfigError("no run found in " + run_dir.string() + " (missing manifest.json)");
  }
  RunManifest manifest = read_manifest(manifest_path);
  std::vector<CellData> cells;
  std::map<std::pair<std::string, double>, std::size_t> index;
  std::size_t decisions = 0;
  for (const auto& summary : manifest.cells) {
    auto key = std::make_pair(summary.cell.pattern_label, summary.cell.temperature);
    auto [it, inserted] = index.try_emplace(key, cells.size());
    if (inserted) {
      CellData c;
      c.run_id = manifest.run_id;
      c.pattern_label = summary.cell.pattern_label;
      c.model_id = summary.cell.model_id;
      c.method = summary.cell.method;
      c.temperature = summary.cell.temperature;
      cells.push_back(std::move(c));
    }
    CellData& cell = cells[it->second];
    const fs::path path = run_dir / summary.file;
    if (!fs::exists(path)) continue;
    for (const auto& r : read_transcript(path)) {
      const auto* d = std::get_if<ParsedDecision>(&r.outcome);
      if (d == nullptr) continue;
      ++decisions;
      if (r.side == Side::kProposer) {
        cell.proposer_offers.push_back(*d->offer);
      } else {
        cell.responder_samples.push_back(
            {*r.offer_shown, *d->choice == ResponderChoice::kAccept});
      }
    }
  }
  if (decisions == 0) {
    throw ConfigError("run " + run_dir.string() + " has no successful decisions");
  }
  std::erase_if(cells, [](const CellData& c) { return c.empty(); });
  return cells;
}

std::vector<fs::path> emit_report(const CellData& cell, const ReferenceDataset& reference,
                                  const fs::path& out_dir, const AnalysisOptions& options) {
  if (cell.empty()) throw AnalysisError("cell " + cell.stem() + " has no decisions");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<fs::path> written;
  const std::string stem = cell.stem();
  const ComparisonReport report = compare_cell(cell, reference, options);
  const std::string title = "pattern " + cell.pattern_label + ", " +
                            std::string(to_string(cell.method)) + ", T=" +
                            format_temperature(cell.temperature);

  if (!cell.proposer_offers.empty()) {
    auto sim = normalized_histogram(cell.proposer_offers, options.bin_width);
    auto ref = normalized_histogram(reference.proposer_offers(), options.bin_width);
    fs::path csv = out_dir / (stem + "_proposer_histogram.csv");
    auto out = open_out(csv);
    out << "bin_start,bin_end,count,frequency,reference_count,reference_frequency\n";
    for (std::size_t i = 0; i < sim.counts.size(); ++i) {
      out << sim.bin_starts[i] << ',' << sim.bin_starts[i] + sim.bin_width << ','
          << sim.counts[i] << ',' << format_double(sim.frequencies[i]) << ','
          << ref.counts[i] << ',' << format_double(ref.frequencies[i]) << '\n';
    }
    finish(out, csv);
    written.push_back(csv);

    double top = 0;
    for (std::size_t i = 0; i < sim.counts.size(); ++i) {
      top = std::max({top, sim.frequencies[i], ref.frequencies[i]});
    }
    Plot plot("Proposer offers, " + title, "normalized frequency", 0,
              std::ceil(top * 10) / 10 + 0.05);
    for (std::size_t i = 0; i < sim.counts.size(); ++i) {
      double x0 = sim.bin_starts[i], x1 = x0 + sim.bin_width;
      plot.rect(x0, x1, ref.frequencies[i], "fill=\"#1f77b4\" fill-opacity=\"0.5\"");
      plot.rect(x0, x1, sim.frequencies[i],
                "fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\"");
    }
    plot.legend(0, "#1f77b4", "reference");
    plot.legend(1, "#d62728", "simulated");
    fs::path svg = out_dir / (stem + "_proposer_histogram.svg");
    write_text(svg, plot.str());
    written.push_back(svg);
  }

  if (!cell.responder_samples.empty()) {
    auto curve = acceptance_curve(cell.responder_samples);
    fs::path csv = out_dir / (stem + "_responder_acceptance.csv");
    auto out = open_out(csv);
    out << "offer,accepted,count,acceptance_rate\n";
    for (const auto& p : curve.points) {
      out << p.offer << ',' << p.accepted << ',' << p.count << ',' << format_double(p.rate)
          << '\n';
    }
    finish(out, csv);
    written.push_back(csv);

    auto fit = piecewise_fit(curve, options.breakpoint, options.weighting);
    fs::path fit_csv = out_dir / (stem + "_responder_fit.csv");
    auto fout = open_out(fit_csv);
    fout << "segment,x,fitted,lower,upper,slope,intercept,n_points,degenerate,breakpoint,"
            "jump,weighting,ci_method\n";
    for (const auto& [name, seg, band] :
         {std::tuple{"left", &fit.left, &fit.left_band},
          std::tuple{"right", &fit.right, &fit.right_band}}) {
      for (const auto& p : *band) {
        fout << name << ',' << format_double(p.x) << ',' << format_double(p.fitted) << ','
             << format_double(p.lower) << ',' << format_double(p.upper) << ','
             << format_double(seg->slope) << ',' << format_double(seg->intercept) << ','
             << seg->n_points << ',' << (seg->degenerate ? 1 : 0) << ',' << fit.breakpoint
             << ',' << format_double(fit.jump) << ',' << to_string(fit.weighting) << ','
             << kCiMethod << '\n';
      }
    }
    finish(fout, fit_csv);
    written.push_back(fit_csv);

    std::optional<PiecewiseFit> ref_fit;
    std::optional<AcceptanceCurve> ref_curve;
    if (!reference.responder_samples.empty()) {
      ref_curve = acceptance_curve(reference.responder_samples);
      ref_fit = piecewise_fit(*ref_curve, options.breakpoint, options.weighting);
    }
    auto [lo, hi] = ref_fit ? fit_range({&fit, &*ref_fit}) : fit_range({&fit});
    Plot plot("Acceptance rate, " + title, "acceptance rate", lo, hi);
    if (ref_fit) band_shapes(plot, *ref_fit, "#1f77b4");
    band_shapes(plot, fit, "#d62728");
    for (const auto& p : curve.points) plot.circle(p.offer, p.rate, 2.5, "fill=\"#d62728\"");
    plot.legend(0, "#1f77b4", "reference fit");
    plot.legend(1, "#d62728", "simulated fit");
    fs::path svg = out_dir / (stem + "_responder_fit.svg");
    write_text(svg, plot.str());
    written.push_back(svg);

    int max_count = 1;
    for (const auto& p : curve.points) max_count = std::max(max_count, p.count);
    if (ref_curve) {
      for (const auto& p : ref_curve->points) max_count = std::max(max_count, p.count);
    }
    Plot bubbles("Acceptance by offer (bubble area ~ count), " + title, "acceptance rate",
                 -0.05, 1.05);
    auto radius = [&](int count) { return 2 + 18 * std::sqrt(double(count) / max_count); };
    if (ref_curve) {
      for (const auto& p : ref_curve->points) {
        bubbles.circle(p.offer, p.rate, radius(p.count),
                       "fill=\"#1f77b4\" fill-opacity=\"0.35\"");
      }
    }
    for (const auto& p : curve.points) {
      bubbles.circle(p.offer, p.rate, radius(p.count),
                     "fill=\"#d62728\" fill-opacity=\"0.35\" stroke=\"#d62728\"");
    }
    bubbles.legend(0, "#1f77b4", "reference");
    bubbles.legend(1, "#d62728", "simulated");
    fs::path bsvg = out_dir / (stem + "_responder_bubbles.svg");
    write_text(bsvg, bubbles.str());
    written.push_back(bsvg);
  }

  fs::path cmp = out_dir / (stem + "_comparison.csv");
  auto out = open_out(cmp);
  out << kComparisonHeader << '\n' << comparison_csv_row(report) << '\n';
  finish(out, cmp);
  written.push_back(cmp);
  return written;
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ConfigError("no column '" + std::string(name) + "'");
}

CsvTable read_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    for (auto f : split(line, ',')) fields.emplace_back(f);
    if (first) {
      table.header = std::move(fields);
      first = false;
    } else {
      table.rows.push_back(std::move(fields));
    }
  }
  return table;
}

}  // namespace ugsim
