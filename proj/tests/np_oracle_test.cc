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

#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "json.hpp"
#include "selectorlab/error.h"
#include "selectorlab/logit_scores.h"
#include "selectorlab/neighbor_index.h"
#include "selectorlab/np_oracle.h"
#include "selectorlab/random.h"
#include "selectorlab/score_vector.h"
#include "selectorlab/synthetic.h"
#include "selectorlab/theorems.h"

namespace selectorlab {
namespace {

TEST(UnitBall, LowDimensions) {
  EXPECT_NEAR(unit_ball_volume(1), 2.0, 1e-15);
  EXPECT_NEAR(unit_ball_volume(2), std::numbers::pi, 1e-14);
  EXPECT_NEAR(unit_ball_volume(3), 4.0 * std::numbers::pi / 3.0, 1e-14);
}

TEST(KnnDensity, KnownRadius) {
  RowMatrix pts(3, 1);
  pts << 0.005, -0.01, 0.5;
  const auto index = NeighborIndex::build(pts, false);
  const std::vector<double> z{0.0};
  EXPECT_NEAR(knn_density_estimate(index, z, 2, 100, 1), 1.0, 1e-12);
  EXPECT_THROW(knn_density_estimate(index, z, 1, 100, 1), ValidationError);
}

TEST(KnnDensity, CoincidentNeighborsRejected) {
  RowMatrix pts(2, 1);
  pts << 1.0, 1.0;
  const auto index = NeighborIndex::build(pts, false);
  const std::vector<double> z{1.0};
  EXPECT_THROW(knn_density_estimate(index, z, 2, 2, 1), ValidationError);
}

TEST(MatchAlpha, NearestAttainableRate) {
  // H0 scores 1..4, H1 scores 0 and 2.5.
  const std::vector<double> s{1, 2, 3, 4, 0, 2.5};
  const std::vector<bool> c{true, true, true, true, false, false};
  auto m = match_alpha(s, c, 0.25);
  EXPECT_DOUBLE_EQ(m.alpha, 0.25);
  EXPECT_DOUBLE_EQ(m.beta, 0.5);
  EXPECT_LT(m.threshold, 2.0);
  EXPECT_GT(m.threshold, 1.0);
  m = match_alpha(s, c, 0.3);
  EXPECT_DOUBLE_EQ(m.alpha, 0.25);
  m = match_alpha(s, c, 0.0);
  EXPECT_DOUBLE_EQ(m.alpha, 0.0);
  EXPECT_DOUBLE_EQ(m.beta, 0.5);
  m = match_alpha(s, c, 1.0);
  EXPECT_DOUBLE_EQ(m.alpha, 1.0);
  EXPECT_DOUBLE_EQ(m.beta, 0.0);
  EXPECT_THROW(match_alpha(s, c, 0.1), ValidationError);
}

TEST(MatchAlpha, TiesLimitAttainableRates) {
  const std::vector<double> s{1, 1, 2, 2, 1.5};
  const std::vector<bool> c{true, true, true, true, false};
  EXPECT_DOUBLE_EQ(match_alpha(s, c, 0.25).alpha, 0.0);
  EXPECT_DOUBLE_EQ(match_alpha(s, c, 0.4).alpha, 0.5);
}

TEST(VerifyBeta, OracleBeatsNoise) {
  const auto spec = synthetic_preset("separated-1d", 4000, 3);
  const auto data = generate(spec);
  const auto oracle = external_scores("oracle", data.oracle.log_lr_rows(data.points));
  Rng rng(8);
  std::vector<double> noise(data.correct.size());
  for (auto& v : noise) v = rng.uniform();
  const std::vector<ScoreVector> competitors{external_scores("noise", noise)};
  const std::vector<double> alphas{0.05, 0.1};
  const auto report = verify_np_beta(oracle, data.correct, alphas, competitors, -0.1);
  EXPECT_TRUE(report.pass);
  ASSERT_EQ(report.rows.size(), 2u);
  EXPECT_LT(report.rows[0].worst_gap, -0.5);
  // The reverse comparison must fail.
  const std::vector<ScoreVector> strong{oracle};
  EXPECT_FALSE(verify_np_beta(competitors[0], data.correct, alphas, strong, 0.0).pass);
}

TEST(RankAgreement, IdenticalOrderIsOne) {
  const std::vector<double> a{1, 5, 2, 8};
  const std::vector<double> b{0.1, 9, 0.2, 10};
  const auto r = rank_agreement(a, b);
  EXPECT_DOUBLE_EQ(r.spearman, 1.0);
  EXPECT_DOUBLE_EQ(r.kendall, 1.0);
}

TEST(Density, PlanarMixtureIntegratesToOne) {
  const auto spec = synthetic_preset("planar", 10, 0);
  for (const DensityModel* model : {&spec.correct_density, &spec.wrong_density}) {
    const double h = 0.05;
    double total = 0.0;
    for (double x = -10; x < 10; x += h) {
      for (double y = -10; y < 10; y += h) {
        const std::vector<double> z{x + h / 2, y + h / 2};
        total += std::exp(model->log_pdf(z)) * h * h;
      }
    }
    EXPECT_NEAR(total, 1.0, 1e-6);
  }
}

TEST(Density, RejectsInvalidCovariance) {
  GaussianComponent bad{Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Zero(2, 2), 1.0, 0};
  EXPECT_THROW(DensityModel::create({bad}), ValidationError);
  Eigen::MatrixXd asym(2, 2);
  asym << 1, 0.5, 0, 1;
  bad.covariance = asym;
  EXPECT_THROW(DensityModel::create({bad}), ValidationError);
}

TEST(Density, HardAssignTakesComponentMax) {
  GaussianComponent a{Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1), 0.9, 0};
  GaussianComponent b{Eigen::VectorXd::Constant(1, 3.0), Eigen::MatrixXd::Identity(1, 1),
                      0.1, 1};
  const auto model = DensityModel::create({a, b}, DensityMode::kHardAssign);
  const std::vector<double> z{2.0};
  EXPECT_DOUBLE_EQ(model.log_pdf(z), model.component_log_pdf(1, z));
}

TEST(Synthetic, CalibratedLogitsMatchPosterior) {
  const auto data = generate(synthetic_preset("calibrated-binary", 500, 2));
  for (std::size_t i = 0; i < 500; ++i) {
    const std::span<const double> z(data.points.row(static_cast<Eigen::Index>(i)).data(), 1);
    const auto post = data.oracle.posterior(z);
    const auto row = data.dataset.logit_row(i);
    const auto pred = static_cast<std::size_t>(data.dataset.predictions()[i]);
    EXPECT_NEAR(row[pred], static_cast<float>(post.log_q), 1e-6);
    EXPECT_EQ(data.correct[i], data.dataset.labels()[i] == data.dataset.predictions()[i]);
  }
}

TEST(Synthetic, SameSeedSameData) {
  const auto a = generate(synthetic_preset("class-gaussians", 300, 9));
  const auto b = generate(synthetic_preset("class-gaussians", 300, 9));
  EXPECT_EQ(a.dataset, b.dataset);
  EXPECT_THROW(synthetic_preset("no-such-preset", 10, 0), ValidationError);
}

TEST(Synthetic, RegionErrorTaskConcentratesMistakes) {
  RegionErrorSpec spec;
  spec.n = 6000;
  spec.seed = 1;
  const auto ds = generate_region_error_task(spec);
  std::size_t inside = 0, inside_wrong = 0, outside = 0, outside_wrong = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const bool wrong = ds.labels()[i] != ds.predictions()[i];
    if (ds.feature_row(i).back() > spec.region_threshold) {
      ++inside;
      inside_wrong += wrong;
    } else {
      ++outside;
      outside_wrong += wrong;
    }
  }
  EXPECT_NEAR(static_cast<double>(inside_wrong) / static_cast<double>(inside), 0.6, 0.05);
  EXPECT_NEAR(static_cast<double>(outside_wrong) / static_cast<double>(outside), 0.02, 0.01);
}

TEST(TheoremRegistry, IdsRoundTrip) {
  EXPECT_EQ(all_theorems().size(), 6u);
  for (TheoremId id : all_theorems()) EXPECT_EQ(parse_theorem_id(theorem_name(id)), id);
  EXPECT_THROW(parse_theorem_id("T9"), ValidationError);
}

TEST(TheoremRegistry, ReportJsonShape) {
  TheoremConfig cfg;
  cfg.calibrated_points = 500;
  const auto r = verify_theorem(TheoremId::kMspOptimal, cfg);
  EXPECT_TRUE(r.pass) << r.detail;
  const std::vector<TheoremResult> results{r};
  const auto json = nlohmann::json::parse(theorem_report_json(results));
  EXPECT_TRUE(json["all_pass"].get<bool>());
  EXPECT_EQ(json["results"][0]["id"], "T1_msp");
  EXPECT_EQ(json["results"][0]["statistics"]["kendall_tau"], 1.0);
}

}  // namespace
}  // namespace selectorlab
