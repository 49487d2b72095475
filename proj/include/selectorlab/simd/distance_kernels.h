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

#ifndef SELECTORLAB_SIMD_DISTANCE_KERNELS_H_
#define SELECTORLAB_SIMD_DISTANCE_KERNELS_H_

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "selectorlab/simd/blocked_points.h"

namespace selectorlab::simd {

enum class Isa { kScalar, kAvx2, kAvx512 };

std::string_view isa_name(Isa isa);

// True when the kernel was compiled in and the CPU supports it.
bool isa_available(Isa isa);

// Widest available ISA, optionally capped by SELECTORLAB_SIMD
// (scalar | avx2 | avx512). Resolved once per process.
Isa active_isa();

// Available ISAs, scalar first.
std::vector<Isa> available_isas();

// out[i] = ||query - point_i||^2 for every (padded) point. Every variant
// accumulates each lane over coordinates in the same order with separate
// multiply and add, so results are bit-identical across ISAs.
void squared_distances(Isa isa, std::span<const double> query,
                       const BlockedPoints& points, std::span<double> out);
void squared_distances(std::span<const double> query,
                       const BlockedPoints& points, std::span<double> out);

}  // namespace selectorlab::simd

#endif  // SELECTORLAB_SIMD_DISTANCE_KERNELS_H_
