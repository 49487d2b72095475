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

#ifndef SELECTORLAB_SIMD_BLOCKED_POINTS_H_
#define SELECTORLAB_SIMD_BLOCKED_POINTS_H_

#include <cstddef>
#include <span>
#include <vector>

#include "selectorlab/dataset.h"

namespace selectorlab::simd {

// Point set stored lane-interleaved for the distance kernels: points are
// grouped in blocks of kLanes, and within a block coordinate j of lane l sits
// at block[j * kLanes + l]. Padding lanes of the last block are zero and their
// distances are ignored by callers.
class BlockedPoints {
 public:
  static constexpr std::size_t kLanes = 8;

  BlockedPoints() = default;
  explicit BlockedPoints(const RowMatrix& points);

  std::size_t size() const { return count_; }
  std::size_t dim() const { return dim_; }
  std::size_t num_blocks() const { return (count_ + kLanes - 1) / kLanes; }
  std::size_t padded_size() const { return num_blocks() * kLanes; }
  const double* data() const { return data_.data(); }

  double at(std::size_t point, std::size_t coord) const {
    return data_[(point / kLanes) * dim_ * kLanes + coord * kLanes +
                 point % kLanes];
  }
  RowMatrix to_matrix() const;

 private:
  std::size_t count_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

}  // namespace selectorlab::simd

#endif  // SELECTORLAB_SIMD_BLOCKED_POINTS_H_
