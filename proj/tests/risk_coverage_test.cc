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

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "json.hpp"
#include "selectorlab/error.h"
#include "selectorlab/random.h"
#include "selectorlab/risk_coverage.h"
#include "selectorlab/score_vector.h"

namespace selectorlab {
namespace {

const std::vector<double> kScores{0.9, 0.1, 0.5, 0.5, 0.7, 0.2, 0.3, 0.8};
const Correctness kCorrect{true, false, true, false, false, true, true, true};

TEST(Select, StrictThreshold) {
  const auto sel = select(kScores, kCorrect, 0.5);
  EXPECT_DOUBLE_EQ(sel.coverage, 3.0 / 8.0);
  EXPECT_DOUBLE_EQ(sel.selective_risk, 1.0 / 3.0);
  EXPECT_FALSE(sel.accepted[2]);
  EXPECT_THROW(select(kScores, kCorrect, 0.9), ValidationError);
}

TEST(Curve, PrefixRisksWithIndexTieBreak) {
  const auto curve = risk_coverage_curve(kScores, kCorrect);
  const std::vector<double> expected{0, 0, 1.0 / 3, 0.25, 0.4, 1.0 / 3,
                                     0.2857142857142857, 0.375};
  ASSERT_EQ(curve.size(), 8u);
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_DOUBLE_EQ(curve[i].selective_risk, expected[i]) << i;
    EXPECT_DOUBLE_EQ(curve[i].coverage, static_cast<double>(i + 1) / 8.0);
  }
  // Index 2 (correct) precedes index 3 (wrong) among the tied 0.5 scores.
  EXPECT_DOUBLE_EQ(curve[3].threshold, 0.5);
  EXPECT_DOUBLE_EQ(curve[4].selective_risk, 0.4);
}

TEST(Aurc, KnownValues) {
  const auto curve = risk_coverage_curve(kScores, kCorrect);
  const double a = aurc(curve);
  EXPECT_NEAR(a, 0.24717261904761903, 1e-15);
  const double o = oracle_aurc(kCorrect);
  EXPECT_NEAR(o, 0.10342261904761904, 1e-15);
  const auto na = naurc(a, o, 3.0 / 8.0);
  ASSERT_TRUE(na.has_value());
  EXPECT_NEAR(*na, 0.5293150684931507, 1e-14);
}

TEST(Aurc, ThreeSampleExamples) {
  const std::vector<double> s{3, 2, 1};
  EXPECT_NEAR(aurc(risk_coverage_curve(s, {true, true, false})), 1.0 / 9.0, 1e-15);
  EXPECT_NEAR(aurc(risk_coverage_curve(s, {false, true, true})), 11.0 / 18.0, 2e-16);
}

TEST(Aurc, MatchesBruteForceOverThresholds) {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 50 + rng.uniform_index(200);
    std::vector<double> s(n);
    Correctness c(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(rng.uniform_index(n));  // plenty of ties
      c[i] = rng.uniform() < 0.7;
    }
    // Prefix n of the (score desc, index asc) order, computed by counting.
    double brute = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t rank = 0, errors = 0;
      for (std::size_t j = 0; j < n; ++j) {
        const bool before = s[j] > s[i] || (s[j] == s[i] && j <= i);
        if (before) {
          ++rank;
        }
      }
      for (std::size_t j = 0; j < n; ++j) {
        std::size_t rj = 0;
        for (std::size_t l = 0; l < n; ++l) {
          if (s[l] > s[j] || (s[l] == s[j] && l <= j)) ++rj;
        }
        if (rj <= rank && !c[j]) ++errors;
      }
      brute += static_cast<double>(errors) / static_cast<double>(rank);
    }
    brute /= static_cast<double>(n);
    EXPECT_NEAR(aurc(risk_coverage_curve(s, c)), brute, 1e-12);
  }
}

TEST(Naurc, UndefinedForDegenerateSets) {
  const std::vector<double> s{1, 2};
  const auto all_right = evaluate(external_scores("s", s), {true, true});
  EXPECT_FALSE(all_right.naurc.has_value());
  EXPECT_EQ(all_right.aurc, 0.0);
  const auto all_wrong = evaluate(external_scores("s", s), {false, false});
  EXPECT_FALSE(all_wrong.naurc.has_value());
  EXPECT_TRUE(nlohmann::json::parse(report_json(all_wrong))["naurc"].is_null());
}

TEST(Naurc, ZeroForPerfectOrdering) {
  const auto r = evaluate(external_scores("s", {5, 4, 3, 2}), {true, true, false, false});
  ASSERT_TRUE(r.naurc.has_value());
  EXPECT_EQ(*r.naurc, 0.0);
  EXPECT_EQ(r.aurc, r.oracle_aurc);
}

TEST(ErrorRates, CountsEachHypothesis) {
  const auto rates = np_error_rates(kScores, kCorrect, 0.5);
  // Correct scores {0.9, 0.5, 0.2, 0.3, 0.8}: three are <= 0.5.
  EXPECT_DOUBLE_EQ(rates.alpha, 3.0 / 5.0);
  // Wrong scores {0.1, 0.5, 0.7}: one is > 0.5.
  EXPECT_DOUBLE_EQ(rates.beta, 1.0 / 3.0);
  EXPECT_THROW(np_error_rates(std::vector<double>{1}, {true}, 0.0), ValidationError);
}

TEST(Ties, CountsGroups) {
  EXPECT_EQ(count_tie_groups(kScores), 1u);
  EXPECT_EQ(count_tie_groups(std::vector<double>{1, 1, 1, 2, 2, 3}), 2u);
}

TEST(Outputs, CsvJsonSvg) {
  const auto r = evaluate(external_scores("rlog", {3, 2, 1}), {true, true, false});
  const auto csv = curve_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "coverage,risk,threshold");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  const auto json = nlohmann::ordered_json::parse(report_json(r));
  EXPECT_EQ(json["score"], "rlog");
  EXPECT_EQ(json["n"], 3);
  EXPECT_DOUBLE_EQ(json["aurc_x100"].get<double>(), 100.0 * r.aurc);
  std::vector<std::string> keys;
  for (auto it = json.begin(); it != json.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"score", "n", "aurc", "aurc_x100", "naurc",
                                            "oracle_aurc", "full_risk", "ties"}));
  const std::vector<RiskCoverageReport> reports{r};
  const auto svg = risk_coverage_svg(reports);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("polyline"), std::string::npos);
  EXPECT_NE(svg.find("rlog"), std::string::npos);
}

}  // namespace
}  // namespace selectorlab
