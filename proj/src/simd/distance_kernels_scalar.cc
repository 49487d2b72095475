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

#include "kernels_internal.h"

namespace selectorlab::simd::internal {

// Reference path.
void squared_distances_scalar(const double* query, const double* blocks,
                              std::size_t num_blocks, std::size_t dim,
                              double* out) {
  constexpr std::size_t kLanes = 8;
  for (std::size_t b = 0; b < num_blocks; ++b) {
    const double* block = blocks + b * dim * kLanes;
    for (std::size_t lane = 0; lane < kLanes; ++lane) {
      double acc = 0.0;
      for (std::size_t j = 0; j < dim; ++j) {
        const double diff = query[j] - block[j * kLanes + lane];
        const double sq = diff * diff;
        acc = acc + sq;
      }
      out[b * kLanes + lane] = acc;
    }
  }
}

}  // namespace selectorlab::simd::internal
