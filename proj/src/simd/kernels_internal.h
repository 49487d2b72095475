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

#ifndef SELECTORLAB_SRC_SIMD_KERNELS_INTERNAL_H_
#define SELECTORLAB_SRC_SIMD_KERNELS_INTERNAL_H_

#include <cstddef>

namespace selectorlab::simd::internal {

// Blocks are laid out as in BlockedPoints with 8 lanes.
void squared_distances_scalar(const double* query, const double* blocks,
                              std::size_t num_blocks, std::size_t dim,
                              double* out);
void squared_distances_avx2(const double* query, const double* blocks,
                            std::size_t num_blocks, std::size_t dim,
                            double* out);
void squared_distances_avx512(const double* query, const double* blocks,
                              std::size_t num_blocks, std::size_t dim,
                              double* out);

}  // namespace selectorlab::simd::internal

#endif  // SELECTORLAB_SRC_SIMD_KERNELS_INTERNAL_H_
