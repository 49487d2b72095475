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

#ifndef SELECTORLAB_DISTANCE_SCORES_H_
#define SELECTORLAB_DISTANCE_SCORES_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "selectorlab/dataset.h"
#include "selectorlab/gaussian_stats.h"
#include "selectorlab/neighbor_index.h"
#include "selectorlab/score_vector.h"

namespace selectorlab {

// Distances are floored here before taking logarithms so that duplicated
// train/test rows stay finite.
inline constexpr double kDistanceFloor = 1e-12;

// -r_k(z): negative distance to the k-th nearest indexed point.
double knn_score(const NeighborIndex& index, std::span<const double> z,
                 std::size_t k);
std::vector<double> knn_scores(const NeighborIndex& index,
                               const RowMatrix& queries, std::size_t k);

// Log-distance contrast between the correct and wrong neighbor sets.
//   averaged = false: -log u_k + log v_k
//   averaged = true:  -(1/k) sum_i log u_i + (1/k) sum_i log v_i
double delta_knn(const NeighborIndex& correct, const NeighborIndex& wrong,
                 std::span<const double> z, std::size_t k, bool averaged = true);
std::vector<double> delta_knn_scores(const NeighborIndex& correct,
                                     const NeighborIndex& wrong,
                                     const RowMatrix& queries, std::size_t k,
                                     bool averaged = true);

// mds(z; correct stats) - mds(z; wrong stats).
double delta_mds(const GaussianStats& correct, const GaussianStats& wrong,
                 std::span<const double> z);
std::vector<double> delta_mds_scores(const GaussianStats& correct,
                                     const GaussianStats& wrong,
                                     const RowMatrix& queries);

struct MdsModel {
  GaussianStats stats;

  static MdsModel fit(const Dataset& train, double shrinkage = 1e-6);
  ScoreVector score(const Dataset& test) const;
};

struct KnnModel {
  NeighborIndex index;

  static KnnModel fit(const Dataset& train, bool normalize = true);
  ScoreVector score(const Dataset& test, std::size_t k) const;
};

struct DeltaMdsOptions {
  double shrinkage = 1e-6;
  // Minimum rows per partition; unset means the feature dimension d. The
  // effective floor is never below 2.
  std::optional<std::size_t> min_partition_samples;
};

// Separate class-wise Gaussian statistics for training rows the classifier
// got right and wrong, keyed by the true label.
struct DeltaMdsModel {
  GaussianStats correct;
  GaussianStats wrong;

  // Throws InsufficientPartitionError when a partition is empty, smaller
  // than the configured floor, or leaves no degrees of freedom for the
  // covariance (e.g. one sample per class).
  static DeltaMdsModel fit(const Dataset& train,
                           const DeltaMdsOptions& options = {});
  ScoreVector score(const Dataset& test) const;
};

struct DeltaKnnModel {
  NeighborIndex correct;
  NeighborIndex wrong;

  // Throws InsufficientPartitionError when either partition is empty.
  static DeltaKnnModel fit(const Dataset& train, bool normalize = true);
  // Throws when k exceeds either partition.
  ScoreVector score(const Dataset& test, std::size_t k,
                    bool averaged = true) const;
};

}  // namespace selectorlab

#endif  // SELECTORLAB_DISTANCE_SCORES_H_
