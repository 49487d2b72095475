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

#include "selectorlab/gaussian_stats.h"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "selectorlab/binary_io.h"
#include "selectorlab/error.h"
#include "selectorlab/parallel.h"
#include "selectorlab/simd/distance_kernels.h"

namespace selectorlab {
namespace {

constexpr std::string_view kMagic = "SST1";
constexpr std::uint32_t kVersion = 1;
constexpr double kSingularRatio = 1e-10;

double choose_ridge(const Eigen::MatrixXd& cov, double shrinkage) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov, Eigen::EigenvaluesOnly);
  const double largest = eig.eigenvalues().maxCoeff();
  const double smallest = eig.eigenvalues().minCoeff();
  if (largest > 0.0 && smallest > kSingularRatio * largest) return 0.0;
  const double d = static_cast<double>(cov.rows());
  const double trace = cov.trace();
  return trace > 0.0 ? shrinkage * trace / d : shrinkage;
}

}  // namespace

GaussianStats GaussianStats::fit(const RowMatrix& features,
                                 std::span<const std::int64_t> labels,
                                 std::size_t num_classes,
                                 const GaussianFitOptions& options) {
  const auto n = static_cast<std::size_t>(features.rows());
  const auto d = static_cast<std::size_t>(features.cols());
  if (labels.size() != n) {
    throw ValidationError("features and labels disagree on the sample count");
  }
  if (n < 2) {
    throw ValidationError("Gaussian statistics need at least 2 samples, got " +
                          std::to_string(n));
  }
  if (options.shrinkage < 0.0) throw ValidationError("shrinkage must be >= 0");

  std::vector<std::size_t> counts(num_classes, 0);
  for (auto y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= num_classes) {
      throw ValidationError("label " + std::to_string(y) + " outside [0, K)");
    }
    ++counts[static_cast<std::size_t>(y)];
  }
  const std::size_t min_count = options.drop_sparse_classes ? 2 : 1;
  std::vector<bool> present(num_classes);
  std::size_t surviving = 0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    present[c] = counts[c] >= min_count;
    surviving += present[c] ? 1 : 0;
  }

  GaussianStats stats;
  if (options.drop_sparse_classes && surviving < 2) {
    // Single global Gaussian over every sample of the partition.
    Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(d);
    for (std::size_t i = 0; i < n; ++i) mean += features.row(i);
    mean /= static_cast<double>(n);
    Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t i = 0; i < n; ++i) {
      const Eigen::RowVectorXd diff = features.row(i) - mean;
      scatter.noalias() += diff.transpose() * diff;
    }
    stats.means_ = mean;
    stats.present_ = {true};
    stats.covariance_ = scatter / static_cast<double>(n - 1);
    stats.sample_count_ = n;
    stats.global_fallback_ = true;
  } else {
    RowMatrix sums = RowMatrix::Zero(num_classes, d);
    std::size_t used = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto y = static_cast<std::size_t>(labels[i]);
      if (!present[y]) continue;
      sums.row(y) += features.row(i);
      ++used;
    }
    RowMatrix means = RowMatrix::Zero(num_classes, d);
    for (std::size_t c = 0; c < num_classes; ++c) {
      if (present[c]) means.row(c) = sums.row(c) / static_cast<double>(counts[c]);
    }
    Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t i = 0; i < n; ++i) {
      const auto y = static_cast<std::size_t>(labels[i]);
      if (!present[y]) continue;
      const Eigen::RowVectorXd diff = features.row(i) - means.row(y);
      scatter.noalias() += diff.transpose() * diff;
    }
    const std::size_t denom = used > surviving ? used - surviving : 1;
    stats.means_ = std::move(means);
    stats.present_ = std::move(present);
    stats.covariance_ = scatter / static_cast<double>(denom);
    stats.sample_count_ = used;
  }
  // Exact symmetry; the outer-product accumulation is symmetric up to
  // rounding only.
  stats.covariance_ = (0.5 * (stats.covariance_ + stats.covariance_.transpose())).eval();
  stats.ridge_ = choose_ridge(stats.covariance_, options.shrinkage);
  stats.factorize();
  return stats;
}

GaussianStats GaussianStats::from_parameters(RowMatrix means,
                                             std::vector<bool> present,
                                             Eigen::MatrixXd covariance,
                                             double ridge,
                                             std::size_t sample_count,
                                             bool global_fallback) {
  if (present.size() != static_cast<std::size_t>(means.rows())) {
    throw ValidationError("presence bitmap must have one entry per mean row");
  }
  if (covariance.rows() != means.cols() || covariance.cols() != means.cols()) {
    throw ValidationError("covariance must be d x d");
  }
  const double scale = std::max(1.0, covariance.cwiseAbs().maxCoeff());
  if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw ValidationError("covariance is not symmetric");
  }
  if (ridge < 0.0) throw ValidationError("ridge must be >= 0");
  GaussianStats stats;
  stats.means_ = std::move(means);
  stats.present_ = std::move(present);
  stats.covariance_ = std::move(covariance);
  stats.ridge_ = ridge;
  stats.sample_count_ = sample_count;
  stats.global_fallback_ = global_fallback;
  stats.factorize();
  return stats;
}

Eigen::MatrixXd GaussianStats::regularized_covariance() const {
  Eigen::MatrixXd reg = covariance_;
  reg.diagonal().array() += ridge_;
  return reg;
}

void GaussianStats::factorize() {
  present_ids_.clear();
  for (std::size_t c = 0; c < present_.size(); ++c) {
    if (present_[c]) present_ids_.push_back(c);
  }
  if (present_ids_.empty()) throw ValidationError("no class has any samples");

  Eigen::LLT<Eigen::MatrixXd> llt(regularized_covariance());
  if (llt.info() != Eigen::Success) {
    throw ValidationError(
        "covariance is not positive definite; increase shrinkage");
  }
  cholesky_ = llt.matrixL();
  for (Eigen::Index i = 0; i < cholesky_.rows(); ++i) {
    if (!(cholesky_(i, i) > 0.0)) {
      throw ValidationError("covariance factor has a non-positive pivot");
    }
  }

  RowMatrix present_means(present_ids_.size(), dim());
  for (std::size_t r = 0; r < present_ids_.size(); ++r) {
    present_means.row(r) = means_.row(present_ids_[r]);
  }
  const Eigen::MatrixXd whitened =
      cholesky_.triangularView<Eigen::Lower>().solve(present_means.transpose());
  whitened_means_ = simd::BlockedPoints(RowMatrix(whitened.transpose()));
}

double GaussianStats::log_det() const {
  return 2.0 * cholesky_.diagonal().array().log().sum();
}

std::vector<double> GaussianStats::squared_distances(
    std::span<const double> z) const {
  if (z.size() != dim()) {
    throw ValidationError("query has dimension " + std::to_string(z.size()) +
                          ", statistics have " + std::to_string(dim()));
  }
  const Eigen::Map<const Eigen::VectorXd> zv(z.data(), static_cast<Eigen::Index>(z.size()));
  const Eigen::VectorXd y = cholesky_.triangularView<Eigen::Lower>().solve(zv);
  std::vector<double> out(whitened_means_.padded_size());
  simd::squared_distances(std::span<const double>(y.data(), y.size()),
                          whitened_means_, out);
  out.resize(whitened_means_.size());
  return out;
}

double GaussianStats::mds_score(std::span<const double> z) const {
  const std::vector<double> d2 = squared_distances(z);
  return -*std::min_element(d2.begin(), d2.end());
}

std::vector<double> GaussianStats::mds_scores(const RowMatrix& queries) const {
  if (static_cast<std::size_t>(queries.cols()) != dim()) {
    throw ValidationError("queries have dimension " +
                          std::to_string(queries.cols()) + ", statistics have " +
                          std::to_string(dim()));
  }
  const auto m = static_cast<std::size_t>(queries.rows());
  std::vector<double> out(m);
  parallel_for(m, [&](std::size_t begin, std::size_t end) {
    const auto rows = static_cast<Eigen::Index>(end - begin);
    // d x rows, one whitened query per (contiguous) column.
    const Eigen::MatrixXd y = cholesky_.triangularView<Eigen::Lower>().solve(
        queries.middleRows(static_cast<Eigen::Index>(begin), rows).transpose());
    std::vector<double> d2(whitened_means_.padded_size());
    const std::size_t k = whitened_means_.size();
    for (Eigen::Index r = 0; r < rows; ++r) {
      simd::squared_distances(
          std::span<const double>(y.col(r).data(), dim()), whitened_means_, d2);
      out[begin + static_cast<std::size_t>(r)] =
          -*std::min_element(d2.begin(), d2.begin() + static_cast<std::ptrdiff_t>(k));
    }
  });
  return out;
}

std::string GaussianStats::encode() const {
  ByteWriter w;
  w.put_bytes(kMagic);
  w.put_u32(kVersion);
  w.put_u64(num_classes());
  w.put_u64(dim());
  w.put_u64(sample_count_);
  w.put_f64(ridge_);
  w.put_u8(global_fallback_ ? 1 : 0);
  for (bool p : present_) w.put_u8(p ? 1 : 0);
  for (Eigen::Index i = 0; i < means_.size(); ++i) w.put_f64(means_.data()[i]);
  for (Eigen::Index r = 0; r < covariance_.rows(); ++r) {
    for (Eigen::Index c = 0; c < covariance_.cols(); ++c) w.put_f64(covariance_(r, c));
  }
  return w.release();
}

GaussianStats GaussianStats::decode(std::string_view bytes,
                                    const std::string& source) {
  ByteReader r(bytes, source);
  r.expect_magic(kMagic);
  const std::uint32_t version = r.get_u32();
  if (version != kVersion) r.fail("unsupported version " + std::to_string(version));
  const std::uint64_t k = r.get_u64();
  const std::uint64_t d = r.get_u64();
  const std::uint64_t count = r.get_u64();
  const double ridge = r.get_f64();
  const std::uint8_t flags = r.get_u8();
  if (flags > 1) r.fail("unknown flag bits");
  if (k < 1 || d < 1) r.fail("empty statistics");
  const long double expected = 1.0L * k + 8.0L * k * d + 8.0L * d * d;
  if (expected != static_cast<long double>(r.remaining())) {
    r.fail("payload size does not match K=" + std::to_string(k) +
           ", d=" + std::to_string(d));
  }
  std::vector<bool> present(k);
  for (std::uint64_t c = 0; c < k; ++c) present[c] = r.get_u8() != 0;
  RowMatrix means(k, d);
  for (Eigen::Index i = 0; i < means.size(); ++i) means.data()[i] = r.get_f64();
  Eigen::MatrixXd cov(d, d);
  for (std::uint64_t a = 0; a < d; ++a) {
    for (std::uint64_t b = 0; b < d; ++b) cov(a, b) = r.get_f64();
  }
  return from_parameters(std::move(means), std::move(present), std::move(cov),
                         ridge, count, flags & 1);
}

}  // namespace selectorlab
