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

#ifndef SELECTORLAB_DATASET_H_
#define SELECTORLAB_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace selectorlab {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Aligned model outputs for N samples: features (N x d), logits (N x K),
// labels and predictions. Immutable once built; share it read-only.
class Dataset {
 public:
  Dataset() = default;

  // Validates every invariant. When `predictions` is empty they are derived
  // as the per-row argmax of `logits` (ties go to the lowest class index).
  static Dataset create(std::string name, std::size_t n, std::size_t dim,
                        std::size_t num_classes, std::vector<float> features,
                        std::vector<float> logits,
                        std::vector<std::int64_t> labels,
                        std::vector<std::int64_t> predictions = {});

  const std::string& name() const { return name_; }
  std::size_t size() const { return n_; }
  std::size_t dim() const { return dim_; }
  std::size_t num_classes() const { return num_classes_; }

  std::span<const float> features() const { return features_; }
  std::span<const float> logits() const { return logits_; }
  std::span<const std::int64_t> labels() const { return labels_; }
  std::span<const std::int64_t> predictions() const { return predictions_; }
  bool predictions_supplied() const { return predictions_supplied_; }

  std::span<const float> feature_row(std::size_t i) const {
    return {features_.data() + i * dim_, dim_};
  }
  std::span<const float> logit_row(std::size_t i) const {
    return {logits_.data() + i * num_classes_, num_classes_};
  }

  // Source index of each row for mixed datasets; empty otherwise.
  std::span<const std::int64_t> provenance() const { return provenance_; }

  Dataset with_name(std::string name) const;
  Dataset with_provenance(std::vector<std::int64_t> provenance) const;
  // Rows `rows` (in the given order) as a new dataset.
  Dataset select_rows(std::span<const std::size_t> rows) const;

  // Features widened to 64 bits.
  RowMatrix feature_matrix() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::string name_;
  std::size_t n_ = 0;
  std::size_t dim_ = 0;
  std::size_t num_classes_ = 0;
  std::vector<float> features_;
  std::vector<float> logits_;
  std::vector<std::int64_t> labels_;
  std::vector<std::int64_t> predictions_;
  bool predictions_supplied_ = false;
  std::vector<std::int64_t> provenance_;
};

// Index of the largest entry; ties resolve to the lowest index.
std::size_t argmax(std::span<const float> row);

enum class DataFormat { kBinary, kCsv };

// .csv selects CSV; anything else is the binary format.
DataFormat format_for_path(std::string_view path);

Dataset load_dataset(const std::string& path, DataFormat format);
Dataset load_dataset(const std::string& path);
void save_dataset(const Dataset& ds, const std::string& path, DataFormat format);
void save_dataset(const Dataset& ds, const std::string& path);

// Binary layout, little-endian:
//   "SCF1" | u32 version=1 | u64 N | u64 d | u64 K | u8 flags
//   | f32 features[N*d] | f32 logits[N*K] | i64 labels[N]
//   | i64 predictions[N]   (flags bit0)
//   | i64 provenance[N]    (flags bit1)
std::string encode_binary(const Dataset& ds);
Dataset decode_binary(std::string_view bytes, const std::string& source,
                      std::string name = {});

// CSV: header `label,pred,f0..f{d-1},l0..l{K-1}`; `pred` may be empty on
// every row, in which case predictions are derived.
std::string encode_csv(const Dataset& ds);
Dataset decode_csv(std::string_view text, const std::string& source,
                   std::string name = {});

struct CorrectnessMask {
  std::vector<bool> mask;
  std::size_t n_correct = 0;
  std::size_t n_wrong = 0;
};

CorrectnessMask correctness(const Dataset& ds);

// One side of the correct/wrong split, rows in original order.
struct Partition {
  RowMatrix features;
  std::vector<std::int64_t> labels;
  std::vector<std::size_t> rows;  // row index in the source dataset

  std::size_t size() const { return rows.size(); }
};

struct PartitionedFeatures {
  Partition correct;
  Partition wrong;
  CorrectnessMask mask;
};

PartitionedFeatures split_by_correctness(const Dataset& ds);

// Inverse of split_by_correctness for the feature matrix.
RowMatrix interleave(const PartitionedFeatures& parts);

struct MixSource {
  std::reference_wrapper<const Dataset> dataset;
  // Absolute row count, or a fraction in (0, 1].
  std::variant<std::size_t, double> amount = 1.0;
};

struct MixSpec {
  std::vector<MixSource> sources;
  std::uint64_t seed = 0;
  std::string name = "mixed";
};

// Number of rows drawn for a fraction: round(f * n), at least one.
std::size_t rows_for_fraction(double fraction, std::size_t n);

// Concatenates seeded draws from every source, sources in order and rows
// within a source in original order. The provenance column holds the source
// index of every row.
Dataset mix_datasets(const MixSpec& spec);

// Class-stratified subsample keeping round(fraction * n_c) rows of every
// class c (at least one if the class is present). Identity at fraction 1.
Dataset subsample_labeled(const Dataset& ds, double fraction,
                          std::uint64_t seed);

}  // namespace selectorlab

#endif  // SELECTORLAB_DATASET_H_
