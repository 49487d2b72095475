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

#include <immintrin.h>

#include "kernels_internal.h"

namespace selectorlab::simd::internal {

void squared_distances_avx512(const double* query, const double* blocks,
                              std::size_t num_blocks, std::size_t dim,
                              double* out) {
  constexpr std::size_t kLanes = 8;
  for (std::size_t b = 0; b < num_blocks; ++b) {
    const double* block = blocks + b * dim * kLanes;
    __m512d acc = _mm512_setzero_pd();
    for (std::size_t j = 0; j < dim; ++j) {
      const __m512d diff = _mm512_sub_pd(_mm512_set1_pd(query[j]),
                                         _mm512_loadu_pd(block + j * kLanes));
      acc = _mm512_add_pd(acc, _mm512_mul_pd(diff, diff));
    }
    _mm512_storeu_pd(out + b * kLanes, acc);
  }
}

}  // namespace selectorlab::simd::internal
