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

#include "selectorlab/np_oracle.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "selectorlab/distance_scores.h"
#include "selectorlab/error.h"
#include "selectorlab/rank_stats.h"
#include "selectorlab/risk_coverage.h"

namespace selectorlab {

double unit_ball_volume(std::size_t dim) {
  const double half = 0.5 * static_cast<double>(dim);
  return std::exp(half * std::log(std::numbers::pi) - std::lgamma(half + 1.0));
}

double knn_density_estimate(const NeighborIndex& index, std::span<const double> z,
                            std::size_t k, std::size_t n, std::size_t dim) {
  if (k < 2) throw ValidationError("the k-NN density estimate needs k >= 2, got " +
                                   std::to_string(k));
  if (n == 0 || dim == 0) throw ValidationError("n and dim must be positive");
  const double r = index.nearest_distances(z, k).back();
  if (r < kDistanceFloor) {
    throw ValidationError("k-th neighbor distance is zero; the density estimate is unbounded");
  }
  return static_cast<double>(k) /
         (static_cast<double>(n) * unit_ball_volume(dim) *
          std::pow(r, static_cast<double>(dim)));
}

RankAgreement rank_agreement(std::span<const double> score,
                             std::span<const double> reference) {
  return {spearman_rho(score, reference), kendall_tau(score, reference)};
}

RankAgreement verify_np_ranking(const ScoreVector& score,
                                const LikelihoodOracle& oracle,
                                const RowMatrix& samples) {
  if (score.size() != static_cast<std::size_t>(samples.rows())) {
    throw ValidationError("score '" + score.name + "' is not aligned with the samples");
  }
  const auto lr = oracle.log_lr_rows(samples);
  return rank_agreement(score.values, lr);
}

MatchedRate match_alpha(std::span<const double> scores,
                        const std::vector<bool>& correct, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ValidationError("alpha must lie in [0, 1]");
  }
  if (scores.size() != correct.size()) {
    throw ValidationError("scores and hypothesis labels are not aligned");
  }
  std::vector<double> h0;
  double max_score = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (correct[i]) h0.push_back(scores[i]);
    max_score = std::max(max_score, scores[i]);
  }
  const std::size_t n0 = h0.size();
  if (n0 == 0 || n0 == scores.size()) {
    throw ValidationError("both hypotheses need samples to match a type-I rate");
  }
  if (alpha > 0.0 && alpha < 1.0 && alpha * static_cast<double>(n0) < 1.0) {
    throw ValidationError("alpha " + std::to_string(alpha) + " is finer than the " +
                          std::to_string(n0) + " H0 samples can resolve");
  }
  std::sort(h0.begin(), h0.end());

  // Rejecting m H0 samples is realizable iff m is 0, n0, or a tie boundary.
  std::size_t best_m = 0;
  double best_gap = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m <= n0; ++m) {
    if (m > 0 && m < n0 && h0[m - 1] == h0[m]) continue;
    const double gap = std::abs(static_cast<double>(m) / static_cast<double>(n0) - alpha);
    if (gap < best_gap) {
      best_gap = gap;
      best_m = m;
    }
  }
  MatchedRate out;
  out.alpha_target = alpha;
  out.threshold = best_m == n0
                      ? max_score
                      : std::nextafter(h0[best_m], -std::numeric_limits<double>::infinity());
  const auto rates = np_error_rates(scores, correct, out.threshold);
  out.alpha = rates.alpha;
  out.beta = rates.beta;
  return out;
}

BetaReport verify_np_beta(const ScoreVector& score, const std::vector<bool>& correct,
                          std::span<const double> alpha_grid,
                          std::span<const ScoreVector> competitors, double tolerance) {
  BetaReport report;
  report.tolerance = tolerance;
  report.pass = true;
  for (double alpha : alpha_grid) {
    BetaComparison row;
    row.alpha_target = alpha;
    row.score = match_alpha(score.values, correct, alpha);
    row.worst_gap = -std::numeric_limits<double>::infinity();
    row.pass = true;
    for (const auto& comp : competitors) {
      auto matched = match_alpha(comp.values, correct, alpha);
      const double gap = row.score.beta - matched.beta;
      row.worst_gap = std::max(row.worst_gap, gap);
      if (gap > tolerance) row.pass = false;
      row.competitors.push_back(matched);
    }
    if (competitors.empty()) row.worst_gap = 0.0;
    report.pass = report.pass && row.pass;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace selectorlab
