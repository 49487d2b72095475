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

#ifndef SELECTORLAB_GAUSSIAN_STATS_H_
#define SELECTORLAB_GAUSSIAN_STATS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "selectorlab/dataset.h"
#include "selectorlab/simd/blocked_points.h"

namespace selectorlab {

struct GaussianFitOptions {
  // Relative ridge: when the covariance is near-singular (smallest eigenvalue
  // <= 1e-10 * largest) shrinkage * trace / d is added to the diagonal, or
  // shrinkage itself when the trace is zero. Zero disables the ridge.
  double shrinkage = 1e-6;
  // Drop classes with fewer than two samples; fall back to a single global
  // mean and covariance when fewer than two classes survive. Used for the
  // wrong-prediction partition.
  bool drop_sparse_classes = false;
};

// Class means with one tied covariance, plus the factorization used to
// evaluate Mahalanobis distances.
//
// The covariance is the pooled, class-centered scatter divided by n - K
// (K = classes that contributed). Distances are evaluated by whitening with
// the Cholesky factor L of the regularized covariance: the squared distance
// to mean i is ||L^-1 z - L^-1 mu_i||^2, computed by the SIMD distance kernel
// against the pre-whitened means.
class GaussianStats {
 public:
  GaussianStats() = default;

  static GaussianStats fit(const RowMatrix& features,
                           std::span<const std::int64_t> labels,
                           std::size_t num_classes,
                           const GaussianFitOptions& options = {});

  // Injects known parameters. Rows of `means` for absent classes are ignored.
  static GaussianStats from_parameters(RowMatrix means, std::vector<bool> present,
                                       Eigen::MatrixXd covariance,
                                       double ridge = 0.0,
                                       std::size_t sample_count = 0,
                                       bool global_fallback = false);

  std::size_t num_classes() const { return static_cast<std::size_t>(means_.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(means_.cols()); }
  const RowMatrix& means() const { return means_; }
  const std::vector<bool>& present() const { return present_; }
  std::size_t num_present() const { return present_ids_.size(); }
  // Estimated covariance before the ridge.
  const Eigen::MatrixXd& covariance() const { return covariance_; }
  // Absolute ridge added to the diagonal (0 if none was needed).
  double ridge() const { return ridge_; }
  std::size_t sample_count() const { return sample_count_; }
  // True when the wrong-side fallback replaced per-class means with one
  // global mean.
  bool global_fallback() const { return global_fallback_; }

  Eigen::MatrixXd regularized_covariance() const;
  const Eigen::MatrixXd& cholesky_lower() const { return cholesky_; }
  double log_det() const;

  // Squared Mahalanobis distance to every present class, in class order.
  std::vector<double> squared_distances(std::span<const double> z) const;

  // max over present classes of -(z - mu_i)^T Sigma^-1 (z - mu_i); <= 0.
  double mds_score(std::span<const double> z) const;
  std::vector<double> mds_scores(const RowMatrix& queries) const;

  // "SST1" | u32 version=1 | u64 K | u64 d | u64 sample_count | f64 ridge
  // | u8 flags (bit0 global fallback) | u8 present[K] | f64 means[K*d]
  // | f64 covariance[d*d]
  std::string encode() const;
  static GaussianStats decode(std::string_view bytes, const std::string& source);

 private:
  void factorize();

  RowMatrix means_;
  std::vector<bool> present_;
  std::vector<std::size_t> present_ids_;
  Eigen::MatrixXd covariance_;
  double ridge_ = 0.0;
  std::size_t sample_count_ = 0;
  bool global_fallback_ = false;

  Eigen::MatrixXd cholesky_;
  simd::BlockedPoints whitened_means_;
};

}  // namespace selectorlab

#endif  // SELECTORLAB_GAUSSIAN_STATS_H_
