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

#ifndef SELECTORLAB_SYNTHETIC_H_
#define SELECTORLAB_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "selectorlab/dataset.h"
#include "selectorlab/random.h"

namespace selectorlab {

struct GaussianComponent {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  double weight = 1.0;
  std::int64_t label = 0;  // class the component's samples carry
};

enum class DensityMode {
  // log sum_i w_i N(z; m_i, S_i)
  kMixture,
  // max_i log N(z; m_i, S_i); weights only affect sampling. This is the
  // class-max model that the Mahalanobis scores assume.
  kHardAssign,
};

// Gaussian-mixture density with closed-form log evaluation and sampling.
class DensityModel {
 public:
  DensityModel() = default;

  // Throws ValidationError on dimension mismatch, a non-positive weight, or a
  // covariance that is not symmetric positive definite.
  static DensityModel create(std::vector<GaussianComponent> components,
                             DensityMode mode = DensityMode::kMixture);
  static DensityModel gaussian(Eigen::VectorXd mean, Eigen::MatrixXd covariance,
                               std::int64_t label = 0);

  std::size_t dim() const { return dim_; }
  DensityMode mode() const { return mode_; }
  const std::vector<GaussianComponent>& components() const { return components_; }

  double log_pdf(std::span<const double> z) const;
  double component_log_pdf(std::size_t c, std::span<const double> z) const;

  // Writes a draw into `out` and returns the component index.
  std::size_t sample(Rng& rng, std::span<double> out) const;

 private:
  std::vector<GaussianComponent> components_;
  std::vector<Eigen::MatrixXd> factors_;  // lower Cholesky factor per component
  std::vector<double> log_norm_;          // -0.5 (d log 2pi + log det S)
  std::vector<double> cumulative_weight_;
  std::size_t dim_ = 0;
  DensityMode mode_ = DensityMode::kMixture;
};

// Exact log-likelihood ratio between the correct and wrong densities.
class LikelihoodOracle {
 public:
  LikelihoodOracle() = default;
  LikelihoodOracle(DensityModel correct, DensityModel wrong, double prior_correct);

  const DensityModel& correct() const { return correct_; }
  const DensityModel& wrong() const { return wrong_; }
  double prior_correct() const { return prior_; }

  double log_correct(std::span<const double> z) const { return correct_.log_pdf(z); }
  double log_wrong(std::span<const double> z) const { return wrong_.log_pdf(z); }
  double log_lr(std::span<const double> z) const;
  std::vector<double> log_lr_rows(const RowMatrix& points) const;

  struct Posterior {
    double log_q = 0.0;           // log P(correct | z)
    double log_one_minus_q = 0.0;
  };
  Posterior posterior(std::span<const double> z) const;

 private:
  DensityModel correct_;
  DensityModel wrong_;
  double prior_ = 0.5;
};

struct SyntheticSpec {
  std::size_t dim = 1;
  DensityModel correct_density;
  DensityModel wrong_density;
  double prior_correct = 0.5;
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  std::size_t num_classes = 2;
};

struct SyntheticData {
  Dataset dataset;
  std::vector<bool> correct;  // hypothesis labels; true = H0
  RowMatrix points;           // features as stored (float-rounded), in double
  LikelihoodOracle oracle;
};

// Each sample is drawn from the correct density with probability
// prior_correct, else from the wrong one. The label is the drawing
// component's class (mod K); correct samples predict it, wrong samples predict
// the next class. Logits are calibrated: the predicted class gets log q(z)
// and the others share log(1 - q(z)) equally.
SyntheticData generate(const SyntheticSpec& spec);

// A classifier whose mistakes concentrate where the last feature coordinate
// exceeds `region_threshold`; its logit margin is independently informative.
struct RegionErrorSpec {
  std::size_t dim = 8;
  std::size_t num_classes = 4;
  std::size_t n = 4000;
  std::uint64_t seed = 0;
  double class_separation = 4.0;  // norm of each class mean
  double region_threshold = 1.0;
  double error_rate_inside = 0.6;
  double error_rate_outside = 0.02;
  double margin_correct = 2.5;  // mean logit boost of the predicted class
  double margin_wrong = 1.0;
  double logit_noise = 1.0;
};

Dataset generate_region_error_task(const RegionErrorSpec& spec);

// Named generator configurations. Geometry is fixed per preset; `n` and
// `seed` only control the draw.
//   calibrated-binary  1-D, K = 2, correct = (wrong + shifted) / 2, prior 3/4
//   class-gaussians    d = 8, K = 4, class-max Gaussians, prior 0.6
//   planar             d = 2, Gaussian against a two-component mixture
//   separated-1d       N(0, 1) against N(4, 1), prior 1/2
std::vector<std::string> synthetic_preset_names();
SyntheticSpec synthetic_preset(const std::string& name, std::size_t n,
                               std::uint64_t seed);

}  // namespace selectorlab

#endif  // SELECTORLAB_SYNTHETIC_H_
