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

#include "selectorlab/simd/blocked_points.h"

namespace selectorlab::simd {

BlockedPoints::BlockedPoints(const RowMatrix& points)
    : count_(static_cast<std::size_t>(points.rows())),
      dim_(static_cast<std::size_t>(points.cols())),
      data_(padded_size() * dim_, 0.0) {
  for (std::size_t i = 0; i < count_; ++i) {
    double* block = data_.data() + (i / kLanes) * dim_ * kLanes;
    for (std::size_t j = 0; j < dim_; ++j) {
      block[j * kLanes + i % kLanes] = points(i, j);
    }
  }
}

RowMatrix BlockedPoints::to_matrix() const {
  RowMatrix m(count_, dim_);
  for (std::size_t i = 0; i < count_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) m(i, j) = at(i, j);
  }
  return m;
}

}  // namespace selectorlab::simd
