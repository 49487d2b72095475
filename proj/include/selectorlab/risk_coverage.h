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

#ifndef SELECTORLAB_RISK_COVERAGE_H_
#define SELECTORLAB_RISK_COVERAGE_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "selectorlab/score_vector.h"

namespace selectorlab {

// Per-sample correctness; true = the classifier was right (hypothesis H0).
using Correctness = std::vector<bool>;

struct Selection {
  std::vector<bool> accepted;
  double coverage = 0.0;
  double selective_risk = 0.0;
};

// Accepts sample i iff scores[i] > gamma (boundary samples are rejected).
// Throws when nothing is accepted: risk at zero coverage is undefined.
Selection select(std::span<const double> scores, const Correctness& correct,
                 double gamma);

struct RiskCoveragePoint {
  double coverage = 0.0;
  double selective_risk = 0.0;
  // Score of the last accepted sample; accepting s >= threshold realizes
  // this prefix.
  double threshold = 0.0;
};

// Samples sorted by score descending, ties by original index ascending;
// point n (n = 1..N) is (n / N, errors among the first n / n).
std::vector<RiskCoveragePoint> risk_coverage_curve(std::span<const double> scores,
                                                   const Correctness& correct);

// Mean of the prefix risks over n = 1..N.
double aurc(std::span<const RiskCoveragePoint> curve);

// AURC of the ordering that places every correct sample first.
double oracle_aurc(const Correctness& correct);

// (aurc - oracle) / (full_risk - oracle); nullopt when the denominator is not
// positive (all-correct or all-wrong sets).
std::optional<double> naurc(double aurc, double oracle_aurc, double full_risk);

struct ErrorRates {
  double alpha = 0.0;  // P(reject | H0): fraction of correct with s <= gamma
  double beta = 0.0;   // P(accept | H1): fraction of wrong with s > gamma
};

// Throws if either hypothesis has no samples.
ErrorRates np_error_rates(std::span<const double> scores,
                          const Correctness& correct, double gamma);

struct RiskCoverageReport {
  std::string score_name;
  std::vector<RiskCoveragePoint> curve;
  double aurc = 0.0;
  double oracle_aurc = 0.0;
  std::optional<double> naurc;
  double full_risk = 0.0;
  std::size_t ties = 0;  // groups of two or more equal scores
  std::size_t n = 0;
};

RiskCoverageReport evaluate(const ScoreVector& scores, const Correctness& correct);

// Number of distinct score values shared by two or more samples.
std::size_t count_tie_groups(std::span<const double> scores);

// `coverage,risk,threshold`
std::string curve_csv(const RiskCoverageReport& report);
// aurc, aurc_x100, naurc (null when undefined), oracle_aurc, full_risk, ties, n
std::string report_json(const RiskCoverageReport& report);
// Risk against coverage, one polyline per report.
std::string risk_coverage_svg(std::span<const RiskCoverageReport> reports);

}  // namespace selectorlab

#endif  // SELECTORLAB_RISK_COVERAGE_H_
