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

void squared_distances_avx2(const double* query, const double* blocks,
                            std::size_t num_blocks, std::size_t dim,
                            double* out) {
  constexpr std::size_t kLanes = 8;
  for (std::size_t b = 0; b < num_blocks; ++b) {
    const double* block = blocks + b * dim * kLanes;
    __m256d acc_lo = _mm256_setzero_pd();
    __m256d acc_hi = _mm256_setzero_pd();
    for (std::size_t j = 0; j < dim; ++j) {
      const __m256d q = _mm256_set1_pd(query[j]);
      const __m256d d_lo = _mm256_sub_pd(q, _mm256_loadu_pd(block + j * kLanes));
      const __m256d d_hi =
          _mm256_sub_pd(q, _mm256_loadu_pd(block + j * kLanes + 4));
      // Keep mul and add separate: no FMA, to match the scalar rounding.
      acc_lo = _mm256_add_pd(acc_lo, _mm256_mul_pd(d_lo, d_lo));
      acc_hi = _mm256_add_pd(acc_hi, _mm256_mul_pd(d_hi, d_hi));
    }
    _mm256_storeu_pd(out + b * kLanes, acc_lo);
    _mm256_storeu_pd(out + b * kLanes + 4, acc_hi);
  }
}

}  // namespace selectorlab::simd::internal
