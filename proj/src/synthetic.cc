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

#include "selectorlab/synthetic.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Cholesky>

#include "selectorlab/error.h"

namespace selectorlab {
namespace {

// Keeps logits finite when a posterior saturates at 0 or 1.
constexpr double kMinLogProb = -700.0;

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

}  // namespace

DensityModel DensityModel::create(std::vector<GaussianComponent> components,
                                  DensityMode mode) {
  if (components.empty()) throw ValidationError("density needs at least one component");
  DensityModel model;
  model.mode_ = mode;
  model.dim_ = static_cast<std::size_t>(components.front().mean.size());
  if (model.dim_ == 0) throw ValidationError("density dimension must be >= 1");
  double total_weight = 0.0;
  for (std::size_t c = 0; c < components.size(); ++c) {
    const auto& comp = components[c];
    const auto d = static_cast<Eigen::Index>(model.dim_);
    if (comp.mean.size() != d || comp.covariance.rows() != d ||
        comp.covariance.cols() != d) {
      throw ValidationError("component " + std::to_string(c) +
                            " does not match dimension " + std::to_string(model.dim_));
    }
    if (!(comp.weight > 0.0) || !std::isfinite(comp.weight)) {
      throw ValidationError("component " + std::to_string(c) + " has a non-positive weight");
    }
    const double asym = (comp.covariance - comp.covariance.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * std::max(1.0, comp.covariance.cwiseAbs().maxCoeff())) {
      throw ValidationError("component " + std::to_string(c) + " covariance is not symmetric");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(comp.covariance);
    if (llt.info() != Eigen::Success) {
      throw ValidationError("component " + std::to_string(c) +
                            " covariance is not positive definite");
    }
    Eigen::MatrixXd lower = llt.matrixL();
    const double log_det = 2.0 * lower.diagonal().array().log().sum();
    model.log_norm_.push_back(
        -0.5 * (static_cast<double>(d) * std::log(2.0 * std::numbers::pi) + log_det));
    model.factors_.push_back(std::move(lower));
    total_weight += comp.weight;
    model.cumulative_weight_.push_back(total_weight);
  }
  for (auto& w : model.cumulative_weight_) w /= total_weight;
  for (auto& comp : components) comp.weight /= total_weight;
  model.components_ = std::move(components);
  return model;
}

DensityModel DensityModel::gaussian(Eigen::VectorXd mean, Eigen::MatrixXd covariance,
                                    std::int64_t label) {
  return create({{std::move(mean), std::move(covariance), 1.0, label}});
}

double DensityModel::component_log_pdf(std::size_t c, std::span<const double> z) const {
  if (z.size() != dim_) {
    throw ValidationError("point has dimension " + std::to_string(z.size()) +
                          ", density expects " + std::to_string(dim_));
  }
  const Eigen::Map<const Eigen::VectorXd> point(z.data(), static_cast<Eigen::Index>(dim_));
  const Eigen::VectorXd white = factors_[c].triangularView<Eigen::Lower>().solve(
      point - components_[c].mean);
  return log_norm_[c] - 0.5 * white.squaredNorm();
}

double DensityModel::log_pdf(std::span<const double> z) const {
  double acc = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < components_.size(); ++c) {
    const double lp = component_log_pdf(c, z);
    if (mode_ == DensityMode::kHardAssign) {
      acc = std::max(acc, lp);
    } else {
      acc = log_add(acc, std::log(components_[c].weight) + lp);
    }
  }
  return acc;
}

std::size_t DensityModel::sample(Rng& rng, std::span<double> out) const {
  const double u = rng.uniform();
  std::size_t c = 0;
  while (c + 1 < cumulative_weight_.size() && u >= cumulative_weight_[c]) ++c;
  Eigen::VectorXd noise(static_cast<Eigen::Index>(dim_));
  for (Eigen::Index j = 0; j < noise.size(); ++j) noise[j] = rng.normal();
  const Eigen::VectorXd draw = components_[c].mean + factors_[c] * noise;
  std::copy(draw.data(), draw.data() + dim_, out.begin());
  return c;
}

LikelihoodOracle::LikelihoodOracle(DensityModel correct, DensityModel wrong,
                                   double prior_correct)
    : correct_(std::move(correct)), wrong_(std::move(wrong)), prior_(prior_correct) {
  if (!(prior_correct > 0.0 && prior_correct <= 1.0)) {
    throw ValidationError("prior of the correct hypothesis must lie in (0, 1]");
  }
  if (correct_.dim() != wrong_.dim()) {
    throw ValidationError("correct and wrong densities differ in dimension");
  }
}

double LikelihoodOracle::log_lr(std::span<const double> z) const {
  return correct_.log_pdf(z) - wrong_.log_pdf(z);
}

std::vector<double> LikelihoodOracle::log_lr_rows(const RowMatrix& points) const {
  std::vector<double> out(static_cast<std::size_t>(points.rows()));
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    out[static_cast<std::size_t>(i)] =
        log_lr({points.row(i).data(), static_cast<std::size_t>(points.cols())});
  }
  return out;
}

LikelihoodOracle::Posterior LikelihoodOracle::posterior(std::span<const double> z) const {
  const double a = std::log(prior_) + correct_.log_pdf(z);
  const double b = prior_ < 1.0 ? std::log1p(-prior_) + wrong_.log_pdf(z)
                                : -std::numeric_limits<double>::infinity();
  const double total = log_add(a, b);
  return {a - total, b - total};
}

SyntheticData generate(const SyntheticSpec& spec) {
  if (spec.n == 0) throw ValidationError("synthetic sample count must be >= 1");
  if (spec.num_classes < 2) throw ValidationError("synthetic data needs K >= 2");
  if (spec.correct_density.dim() != spec.dim || spec.wrong_density.dim() != spec.dim) {
    throw ValidationError("spec densities do not match dim " + std::to_string(spec.dim));
  }
  LikelihoodOracle oracle(spec.correct_density, spec.wrong_density, spec.prior_correct);

  const std::size_t n = spec.n;
  const std::size_t d = spec.dim;
  const std::size_t k = spec.num_classes;
  Rng rng(spec.seed);
  std::vector<float> features(n * d);
  std::vector<float> logits(n * k);
  std::vector<std::int64_t> labels(n);
  std::vector<std::int64_t> predictions(n);
  std::vector<bool> correct(n);
  RowMatrix points(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  std::vector<double> draw(d);

  for (std::size_t i = 0; i < n; ++i) {
    const bool is_correct = rng.uniform() < spec.prior_correct;
    const DensityModel& source = is_correct ? spec.correct_density : spec.wrong_density;
    const std::size_t comp = source.sample(rng, draw);
    for (std::size_t j = 0; j < d; ++j) {
      // The oracle sees exactly the stored single-precision value.
      const float f = static_cast<float>(draw[j]);
      features[i * d + j] = f;
      points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = f;
    }
    const auto label = static_cast<std::int64_t>(
        static_cast<std::size_t>(source.components()[comp].label) % k);
    labels[i] = label;
    predictions[i] = is_correct ? label : (label + 1) % static_cast<std::int64_t>(k);
    correct[i] = is_correct;

    const auto post = oracle.posterior(
        {points.row(static_cast<Eigen::Index>(i)).data(), d});
    const double top = std::max(post.log_q, kMinLogProb);
    const double rest =
        std::max(post.log_one_minus_q - std::log(static_cast<double>(k - 1)), kMinLogProb);
    for (std::size_t c = 0; c < k; ++c) {
      logits[i * k + c] = static_cast<float>(
          static_cast<std::int64_t>(c) == predictions[i] ? top : rest);
    }
  }

  SyntheticData out;
  out.dataset = Dataset::create("synthetic", n, d, k, std::move(features),
                                std::move(logits), std::move(labels),
                                std::move(predictions));
  out.correct = std::move(correct);
  out.points = std::move(points);
  out.oracle = std::move(oracle);
  return out;
}

Dataset generate_region_error_task(const RegionErrorSpec& spec) {
  if (spec.num_classes < 2 || spec.num_classes + 1 > spec.dim) {
    throw ValidationError("region task needs 2 <= K <= dim - 1");
  }
  if (spec.n == 0) throw ValidationError("region task sample count must be >= 1");
  const std::size_t n = spec.n;
  const std::size_t d = spec.dim;
  const std::size_t k = spec.num_classes;
  Rng rng(spec.seed);
  std::vector<float> features(n * d);
  std::vector<float> logits(n * k);
  std::vector<std::int64_t> labels(n);
  std::vector<std::int64_t> predictions(n);

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t y = rng.uniform_index(k);
    for (std::size_t j = 0; j < d; ++j) {
      const double mean = j == y ? spec.class_separation : 0.0;
      features[i * d + j] = static_cast<float>(mean + rng.normal());
    }
    const bool inside = features[i * d + d - 1] > spec.region_threshold;
    const double error_rate = inside ? spec.error_rate_inside : spec.error_rate_outside;
    const bool wrong = rng.uniform() < error_rate;
    std::size_t pred = y;
    if (wrong) pred = (y + 1 + rng.uniform_index(k - 1)) % k;

    const double margin = wrong ? spec.margin_wrong : spec.margin_correct;
    double runner_up = -std::numeric_limits<double>::infinity();
    std::vector<double> row(k);
    for (std::size_t c = 0; c < k; ++c) {
      row[c] = spec.logit_noise * rng.normal();
      if (c != pred) runner_up = std::max(runner_up, row[c]);
    }
    // The predicted class always leads by a positive margin.
    row[pred] = runner_up + std::abs(margin + spec.logit_noise * rng.normal());
    for (std::size_t c = 0; c < k; ++c) logits[i * k + c] = static_cast<float>(row[c]);
    labels[i] = static_cast<std::int64_t>(y);
    predictions[i] = static_cast<std::int64_t>(pred);
  }
  return Dataset::create("region-error", n, d, k, std::move(features), std::move(logits),
                         std::move(labels), std::move(predictions));
}

namespace {

Eigen::MatrixXd scaled_identity(std::size_t d, double variance) {
  const auto n = static_cast<Eigen::Index>(d);
  return variance * Eigen::MatrixXd::Identity(n, n);
}

Eigen::VectorXd point(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

Eigen::MatrixXd random_spd(Rng& rng, std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = rng.normal();
  }
  Eigen::MatrixXd s = a * a.transpose() / static_cast<double>(d) + 0.5 * scaled_identity(d, 1.0);
  return 0.5 * (s + s.transpose());
}

Eigen::VectorXd random_vector(Rng& rng, std::size_t d, double scale) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(d));
  for (Eigen::Index j = 0; j < v.size(); ++j) v[j] = scale * rng.normal();
  return v;
}

constexpr std::uint64_t kGeometrySeed = 0x5e1ec7;

}  // namespace

std::vector<std::string> synthetic_preset_names() {
  return {"calibrated-binary", "class-gaussians", "planar", "separated-1d"};
}

SyntheticSpec synthetic_preset(const std::string& name, std::size_t n, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.n = n;
  spec.seed = seed;
  if (name == "calibrated-binary") {
    spec.dim = 1;
    spec.num_classes = 2;
    spec.prior_correct = 0.75;
    spec.wrong_density = DensityModel::gaussian(point({0.0}), scaled_identity(1, 1.0), 0);
    spec.correct_density = DensityModel::create(
        {{point({0.0}), scaled_identity(1, 1.0), 0.5, 0},
         {point({1.5}), scaled_identity(1, 1.0), 0.5, 1}});
  } else if (name == "class-gaussians") {
    constexpr std::size_t kDim = 8;
    constexpr std::size_t kClasses = 4;
    spec.dim = kDim;
    spec.num_classes = kClasses;
    spec.prior_correct = 0.6;
    Rng rng(kGeometrySeed);
    const Eigen::MatrixXd cov_c = random_spd(rng, kDim);
    const Eigen::MatrixXd cov_w = random_spd(rng, kDim);
    std::vector<GaussianComponent> c_comps;
    std::vector<GaussianComponent> w_comps;
    for (std::size_t c = 0; c < kClasses; ++c) {
      const Eigen::VectorXd mc = random_vector(rng, kDim, 3.0);
      const Eigen::VectorXd mw = mc + random_vector(rng, kDim, 1.5);
      c_comps.push_back({mc, cov_c, 1.0, static_cast<std::int64_t>(c)});
      w_comps.push_back({mw, cov_w, 1.0, static_cast<std::int64_t>(c)});
    }
    spec.correct_density = DensityModel::create(std::move(c_comps), DensityMode::kHardAssign);
    spec.wrong_density = DensityModel::create(std::move(w_comps), DensityMode::kHardAssign);
  } else if (name == "planar") {
    spec.dim = 2;
    spec.num_classes = 2;
    spec.prior_correct = 0.5;
    spec.correct_density =
        DensityModel::gaussian(point({0.0, 0.0}), scaled_identity(2, 1.0), 0);
    spec.wrong_density =
        DensityModel::create({{point({2.0, 0.0}), scaled_identity(2, 0.5), 0.5, 0},
                              {point({-1.0, 2.0}), scaled_identity(2, 0.8), 0.5, 1}});
  } else if (name == "separated-1d") {
    spec.dim = 1;
    spec.num_classes = 2;
    spec.prior_correct = 0.5;
    spec.correct_density = DensityModel::gaussian(point({0.0}), scaled_identity(1, 1.0), 0);
    spec.wrong_density = DensityModel::gaussian(point({4.0}), scaled_identity(1, 1.0), 0);
  } else {
    std::string known;
    for (const auto& p : synthetic_preset_names()) known += (known.empty() ? "" : ", ") + p;
    throw ValidationError("unknown synthetic preset '" + name + "' (known: " + known + ")");
  }
  return spec;
}

}  // namespace selectorlab
