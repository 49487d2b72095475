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

#include "selectorlab/distance_scores.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "selectorlab/error.h"
#include "selectorlab/parallel.h"

namespace selectorlab {
namespace {

constexpr const char* kFallbackAdvice =
    "; distance scores are not applicable, fall back to a logit score such as "
    "rlog";

double log_floored(double distance) {
  return std::log(std::max(distance, kDistanceFloor));
}

double log_distance_term(std::span<const double> distances, bool averaged) {
  if (!averaged) return log_floored(distances.back());
  double total = 0.0;
  for (double d : distances) total += log_floored(d);
  return total / static_cast<double>(distances.size());
}

void check_partition_k(const NeighborIndex& correct, const NeighborIndex& wrong,
                       std::size_t k) {
  const std::size_t limit = std::min(correct.size(), wrong.size());
  if (k < 1 || k > limit) {
    throw ValidationError("k=" + std::to_string(k) +
                          " exceeds min(N_c, N_w) = min(" +
                          std::to_string(correct.size()) + ", " +
                          std::to_string(wrong.size()) + ")");
  }
}

std::size_t degrees_of_freedom(std::span<const std::int64_t> labels) {
  std::map<std::int64_t, std::size_t> counts;
  for (auto y : labels) ++counts[y];
  return labels.size() - counts.size();
}

}  // namespace

double knn_score(const NeighborIndex& index, std::span<const double> z,
                 std::size_t k) {
  return -index.nearest_distances(z, k).back();
}

std::vector<double> knn_scores(const NeighborIndex& index,
                               const RowMatrix& queries, std::size_t k) {
  if (k < 1 || k > index.size()) {
    throw ValidationError("k=" + std::to_string(k) + " is outside [1, M] for M=" +
                          std::to_string(index.size()) + " indexed points");
  }
  const auto m = static_cast<std::size_t>(queries.rows());
  const auto d = static_cast<std::size_t>(queries.cols());
  std::vector<double> out(m);
  const simd::Isa isa = simd::active_isa();
  parallel_for(m, [&](std::size_t begin, std::size_t end) {
    std::vector<double> scratch;
    std::vector<double> query;
    std::vector<double> nn(k);
    for (std::size_t i = begin; i < end; ++i) {
      index.nearest_distances(std::span<const double>(queries.row(i).data(), d), k,
                              isa, scratch, query, nn);
      out[i] = -nn.back();
    }
  });
  return out;
}

double delta_knn(const NeighborIndex& correct, const NeighborIndex& wrong,
                 std::span<const double> z, std::size_t k, bool averaged) {
  check_partition_k(correct, wrong, k);
  const std::vector<double> u = correct.nearest_distances(z, k);
  const std::vector<double> v = wrong.nearest_distances(z, k);
  return -log_distance_term(u, averaged) + log_distance_term(v, averaged);
}

std::vector<double> delta_knn_scores(const NeighborIndex& correct,
                                     const NeighborIndex& wrong,
                                     const RowMatrix& queries, std::size_t k,
                                     bool averaged) {
  check_partition_k(correct, wrong, k);
  const auto m = static_cast<std::size_t>(queries.rows());
  const auto d = static_cast<std::size_t>(queries.cols());
  std::vector<double> out(m);
  const simd::Isa isa = simd::active_isa();
  parallel_for(m, [&](std::size_t begin, std::size_t end) {
    std::vector<double> scratch;
    std::vector<double> query;
    std::vector<double> u(k);
    std::vector<double> v(k);
    for (std::size_t i = begin; i < end; ++i) {
      const std::span<const double> z(queries.row(i).data(), d);
      correct.nearest_distances(z, k, isa, scratch, query, u);
      wrong.nearest_distances(z, k, isa, scratch, query, v);
      out[i] = -log_distance_term(u, averaged) + log_distance_term(v, averaged);
    }
  });
  return out;
}

double delta_mds(const GaussianStats& correct, const GaussianStats& wrong,
                 std::span<const double> z) {
  return correct.mds_score(z) - wrong.mds_score(z);
}

std::vector<double> delta_mds_scores(const GaussianStats& correct,
                                     const GaussianStats& wrong,
                                     const RowMatrix& queries) {
  std::vector<double> c = correct.mds_scores(queries);
  const std::vector<double> w = wrong.mds_scores(queries);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= w[i];
  return c;
}

MdsModel MdsModel::fit(const Dataset& train, double shrinkage) {
  GaussianFitOptions options;
  options.shrinkage = shrinkage;
  return {GaussianStats::fit(train.feature_matrix(), train.labels(),
                             train.num_classes(), options)};
}

ScoreVector MdsModel::score(const Dataset& test) const {
  ScoreVector s;
  s.method = ScoreMethod::kMds;
  s.name = "mds";
  s.values = stats.mds_scores(test.feature_matrix());
  s.params.normalized = false;
  return s;
}

KnnModel KnnModel::fit(const Dataset& train, bool normalize) {
  return {NeighborIndex::build(train.feature_matrix(), normalize)};
}

ScoreVector KnnModel::score(const Dataset& test, std::size_t k) const {
  ScoreVector s;
  s.method = ScoreMethod::kKnn;
  s.name = "knn";
  s.values = knn_scores(index, test.feature_matrix(), k);
  s.params.k = k;
  s.params.normalized = index.normalized();
  return s;
}

DeltaMdsModel DeltaMdsModel::fit(const Dataset& train,
                                 const DeltaMdsOptions& options) {
  const PartitionedFeatures parts = split_by_correctness(train);
  const std::size_t floor =
      std::max<std::size_t>(2, options.min_partition_samples.value_or(train.dim()));
  if (parts.wrong.size() == 0) {
    throw InsufficientPartitionError(
        "the training split has no misclassified samples" +
        std::string(kFallbackAdvice));
  }
  using Named = std::pair<const char*, const Partition*>;
  for (const auto& [name, part] :
       {Named{"correct", &parts.correct}, Named{"wrong", &parts.wrong}}) {
    if (part->size() < floor) {
      throw InsufficientPartitionError(
          std::string(name) + " partition has " + std::to_string(part->size()) +
          " samples, Δ-MDS needs at least " + std::to_string(floor) +
          kFallbackAdvice);
    }
  }
  if (degrees_of_freedom(parts.correct.labels) < 1) {
    throw InsufficientPartitionError(
        "every class in the correct partition has a single sample, so no "
        "covariance can be estimated" +
        std::string(kFallbackAdvice));
  }

  GaussianFitOptions correct_opts;
  correct_opts.shrinkage = options.shrinkage;
  GaussianFitOptions wrong_opts = correct_opts;
  wrong_opts.drop_sparse_classes = true;
  DeltaMdsModel model;
  model.correct = GaussianStats::fit(parts.correct.features, parts.correct.labels,
                                     train.num_classes(), correct_opts);
  model.wrong = GaussianStats::fit(parts.wrong.features, parts.wrong.labels,
                                   train.num_classes(), wrong_opts);
  return model;
}

ScoreVector DeltaMdsModel::score(const Dataset& test) const {
  ScoreVector s;
  s.method = ScoreMethod::kDeltaMds;
  s.name = "delta-mds";
  s.values = delta_mds_scores(correct, wrong, test.feature_matrix());
  s.params.normalized = false;
  return s;
}

DeltaKnnModel DeltaKnnModel::fit(const Dataset& train, bool normalize) {
  const PartitionedFeatures parts = split_by_correctness(train);
  if (parts.wrong.size() == 0) {
    throw InsufficientPartitionError(
        "the training split has no misclassified samples" +
        std::string(kFallbackAdvice));
  }
  if (parts.correct.size() == 0) {
    throw InsufficientPartitionError(
        "the training split has no correctly classified samples" +
        std::string(kFallbackAdvice));
  }
  return {NeighborIndex::build(parts.correct.features, normalize),
          NeighborIndex::build(parts.wrong.features, normalize)};
}

ScoreVector DeltaKnnModel::score(const Dataset& test, std::size_t k,
                                 bool averaged) const {
  ScoreVector s;
  s.method = ScoreMethod::kDeltaKnn;
  s.name = "delta-knn";
  s.values = delta_knn_scores(correct, wrong, test.feature_matrix(), k, averaged);
  s.params.k = k;
  s.params.averaged = averaged;
  s.params.normalized = correct.normalized();
  return s;
}

}  // namespace selectorlab
