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

#ifndef SELECTORLAB_NP_ORACLE_H_
#define SELECTORLAB_NP_ORACLE_H_

#include <cstddef>
#include <span>
#include <vector>

#include "selectorlab/neighbor_index.h"
#include "selectorlab/score_vector.h"
#include "selectorlab/synthetic.h"

namespace selectorlab {

// Volume of the unit ball in `dim` dimensions.
double unit_ball_volume(std::size_t dim);

// k / (n V_d r_k^d) with r_k the k-th neighbor distance of z.
// Requires k >= 2; throws if r_k is below the distance floor.
double knn_density_estimate(const NeighborIndex& index, std::span<const double> z,
                            std::size_t k, std::size_t n, std::size_t dim);

struct RankAgreement {
  double spearman = 0.0;
  double kendall = 0.0;
};

RankAgreement verify_np_ranking(const ScoreVector& score,
                                const LikelihoodOracle& oracle,
                                const RowMatrix& samples);
RankAgreement rank_agreement(std::span<const double> score,
                             std::span<const double> reference);

// Threshold whose empirical type-I rate is closest to `alpha`. Among
// thresholds with that rate the largest is used, which minimizes beta.
struct MatchedRate {
  double alpha_target = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double threshold = 0.0;
};

// Throws ValidationError if 0 < alpha < 1 and alpha * n_H0 < 1.
MatchedRate match_alpha(std::span<const double> scores,
                        const std::vector<bool>& correct, double alpha);

struct BetaComparison {
  double alpha_target = 0.0;
  MatchedRate score;
  std::vector<MatchedRate> competitors;
  double worst_gap = 0.0;  // max over competitors of beta_score - beta_competitor
  bool pass = false;
};

struct BetaReport {
  std::vector<BetaComparison> rows;
  double tolerance = 0.0;
  bool pass = false;
};

// Passes iff at every alpha the score's beta <= each competitor's beta +
// tolerance. A negative tolerance demands a margin.
BetaReport verify_np_beta(const ScoreVector& score, const std::vector<bool>& correct,
                          std::span<const double> alpha_grid,
                          std::span<const ScoreVector> competitors,
                          double tolerance = 0.0);

}  // namespace selectorlab

#endif  // SELECTORLAB_NP_ORACLE_H_
