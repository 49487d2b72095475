/*
 * Copyright 2026 The SelectorLab Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "selectorlab/risk_coverage.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "json.hpp"
#include "selectorlab/error.h"

namespace selectorlab {
namespace {

void check_aligned(std::span<const double> scores, const Correctness& correct) {
  if (scores.size() != correct.size()) {
    throw ValidationError("scores (" + std::to_string(scores.size()) +
                          ") and correctness (" + std::to_string(correct.size()) +
                          ") are not aligned");
  }
}

std::string fmt(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

Selection select(std::span<const double> scores, const Correctness& correct,
                 double gamma) {
  check_aligned(scores, correct);
  Selection sel;
  sel.accepted.resize(scores.size());
  std::size_t accepted = 0;
  std::size_t errors = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    sel.accepted[i] = scores[i] > gamma;
    if (sel.accepted[i]) {
      ++accepted;
      if (!correct[i]) ++errors;
    }
  }
  if (accepted == 0) {
    throw ValidationError("threshold " + fmt(gamma) +
                          " rejects every sample; selective risk is undefined at "
                          "zero coverage");
  }
  sel.coverage = static_cast<double>(accepted) / static_cast<double>(scores.size());
  sel.selective_risk = static_cast<double>(errors) / static_cast<double>(accepted);
  return sel;
}

std::vector<RiskCoveragePoint> risk_coverage_curve(std::span<const double> scores,
                                                   const Correctness& correct) {
  check_aligned(scores, correct);
  const std::size_t n = scores.size();
  if (n == 0) throw ValidationError("risk-coverage curve needs at least one sample");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  std::vector<RiskCoveragePoint> curve(n);
  std::size_t errors = 0;
  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t i = order[pos];
    if (!correct[i]) ++errors;
    const double accepted = static_cast<double>(pos + 1);
    curve[pos] = {accepted / static_cast<double>(n),
                  static_cast<double>(errors) / accepted, scores[i]};
  }
  return curve;
}

double aurc(std::span<const RiskCoveragePoint> curve) {
  if (curve.empty()) throw ValidationError("AURC of an empty curve");
  double total = 0.0;
  for (const auto& p : curve) total += p.selective_risk;
  return total / static_cast<double>(curve.size());
}

double oracle_aurc(const Correctness& correct) {
  std::vector<double> oracle(correct.size());
  for (std::size_t i = 0; i < correct.size(); ++i) oracle[i] = correct[i] ? 1.0 : 0.0;
  return aurc(risk_coverage_curve(oracle, correct));
}

std::optional<double> naurc(double aurc_value, double oracle, double full_risk) {
  const double denom = full_risk - oracle;
  if (!(denom > 0.0)) return std::nullopt;
  return (aurc_value - oracle) / denom;
}

ErrorRates np_error_rates(std::span<const double> scores,
                          const Correctness& correct, double gamma) {
  check_aligned(scores, correct);
  std::size_t n0 = 0;
  std::size_t n1 = 0;
  std::size_t rejected0 = 0;
  std::size_t accepted1 = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (correct[i]) {
      ++n0;
      if (scores[i] <= gamma) ++rejected0;
    } else {
      ++n1;
      if (scores[i] > gamma) ++accepted1;
    }
  }
  if (n0 == 0 || n1 == 0) {
    throw ValidationError(
        "type I/II rates need samples of both hypotheses (correct: " +
        std::to_string(n0) + ", wrong: " + std::to_string(n1) + ")");
  }
  return {static_cast<double>(rejected0) / static_cast<double>(n0),
          static_cast<double>(accepted1) / static_cast<double>(n1)};
}

std::size_t count_tie_groups(std::span<const double> scores) {
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  std::size_t groups = 0;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] == sorted[i - 1] && (i < 2 || sorted[i - 1] != sorted[i - 2])) {
      ++groups;
    }
  }
  return groups;
}

RiskCoverageReport evaluate(const ScoreVector& scores, const Correctness& correct) {
  scores.check_finite();
  RiskCoverageReport r;
  r.score_name = scores.name;
  r.n = scores.size();
  r.curve = risk_coverage_curve(scores.values, correct);
  r.aurc = aurc(r.curve);
  r.oracle_aurc = oracle_aurc(correct);
  r.full_risk = r.curve.back().selective_risk;
  r.naurc = naurc(r.aurc, r.oracle_aurc, r.full_risk);
  r.ties = count_tie_groups(scores.values);
  return r;
}

std::string curve_csv(const RiskCoverageReport& report) {
  std::string out = "coverage,risk,threshold\n";
  for (const auto& p : report.curve) {
    out += fmt(p.coverage) + "," + fmt(p.selective_risk) + "," + fmt(p.threshold) + "\n";
  }
  return out;
}

std::string report_json(const RiskCoverageReport& report) {
  nlohmann::ordered_json j;
  j["score"] = report.score_name;
  j["n"] = report.n;
  j["aurc"] = report.aurc;
  j["aurc_x100"] = report.aurc * 100.0;
  j["naurc"] = report.naurc ? nlohmann::ordered_json(*report.naurc)
                            : nlohmann::ordered_json(nullptr);
  j["oracle_aurc"] = report.oracle_aurc;
  j["full_risk"] = report.full_risk;
  j["ties"] = report.ties;
  return j.dump(2) + "\n";
}

std::string risk_coverage_svg(std::span<const RiskCoverageReport> reports) {
  constexpr double kWidth = 640;
  constexpr double kHeight = 420;
  constexpr double kMargin = 50;
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                  "#9467bd", "#8c564b", "#e377c2", "#17becf"};
  double max_risk = 0.0;
  for (const auto& r : reports) {
    for (const auto& p : r.curve) max_risk = std::max(max_risk, p.selective_risk);
  }
  if (max_risk <= 0.0) max_risk = 1.0;
  const double plot_w = kWidth - 2 * kMargin;
  const double plot_h = kHeight - 2 * kMargin;
  auto x_of = [&](double c) { return kMargin + c * plot_w; };
  auto y_of = [&](double r) { return kHeight - kMargin - r / max_risk * plot_h; };

  std::string svg =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\" "
      "viewBox=\"0 0 640 420\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<line x1=\"" + fmt(kMargin) + "\" y1=\"" + fmt(kHeight - kMargin) +
         "\" x2=\"" + fmt(kWidth - kMargin) + "\" y2=\"" + fmt(kHeight - kMargin) +
         "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + fmt(kMargin) + "\" y1=\"" + fmt(kMargin) + "\" x2=\"" +
         fmt(kMargin) + "\" y2=\"" + fmt(kHeight - kMargin) + "\" stroke=\"black\"/>\n";
  svg += "<text x=\"320\" y=\"405\" text-anchor=\"middle\" font-size=\"13\">coverage</text>\n";
  svg += "<text x=\"15\" y=\"210\" text-anchor=\"middle\" font-size=\"13\" "
         "transform=\"rotate(-90 15 210)\">selective risk</text>\n";
  svg += "<text x=\"" + fmt(kMargin - 5) + "\" y=\"" + fmt(kMargin + 4) +
         "\" text-anchor=\"end\" font-size=\"11\">" + fmt(max_risk) + "</text>\n";
  for (std::size_t r = 0; r < reports.size(); ++r) {
    const char* color = kColors[r % 8];
    // Thin long curves to at most ~1000 vertices; the last point is kept.
    const auto& curve = reports[r].curve;
    const std::size_t stride = std::max<std::size_t>(1, curve.size() / 1000);
    std::string points;
    for (std::size_t i = 0; i < curve.size(); i += stride) {
      points += fmt(x_of(curve[i].coverage)) + "," + fmt(y_of(curve[i].selective_risk)) + " ";
    }
    if (!curve.empty() && (curve.size() - 1) % stride != 0) {
      points += fmt(x_of(curve.back().coverage)) + "," +
                fmt(y_of(curve.back().selective_risk));
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
    svg += "<text x=\"" + fmt(kMargin + 10) + "\" y=\"" + fmt(kMargin + 14.0 * (r + 1)) +
           "\" font-size=\"12\" fill=\"" + color + "\">" + reports[r].score_name +
           "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace selectorlab
