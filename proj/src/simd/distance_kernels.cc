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

#include "selectorlab/simd/distance_kernels.h"

#include <cstdlib>
#include <string>

#include "kernels_internal.h"
#include "selectorlab/error.h"

namespace selectorlab::simd {
namespace {

bool cpu_supports(Isa isa) {
#if defined(__x86_64__) || defined(__i386__)
  switch (isa) {
    case Isa::kScalar: return true;
    case Isa::kAvx2: return __builtin_cpu_supports("avx2");
    case Isa::kAvx512: return __builtin_cpu_supports("avx512f");
  }
  return false;
#else
  return isa == Isa::kScalar;
#endif
}

bool compiled_in(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return true;
    case Isa::kAvx2:
#if defined(SELECTORLAB_BUILD_AVX2)
      return true;
#else
      return false;
#endif
    case Isa::kAvx512:
#if defined(SELECTORLAB_BUILD_AVX512)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa resolve_active() {
  Isa cap = Isa::kAvx512;
  if (const char* env = std::getenv("SELECTORLAB_SIMD")) {
    const std::string v(env);
    if (v == "scalar") cap = Isa::kScalar;
    if (v == "avx2") cap = Isa::kAvx2;
  }
  for (Isa isa : {Isa::kAvx512, Isa::kAvx2}) {
    if (static_cast<int>(isa) <= static_cast<int>(cap) && isa_available(isa)) {
      return isa;
    }
  }
  return Isa::kScalar;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kAvx512: return "avx512";
  }
  return "unknown";
}

bool isa_available(Isa isa) { return compiled_in(isa) && cpu_supports(isa); }

Isa active_isa() {
  static const Isa isa = resolve_active();
  return isa;
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::kScalar, Isa::kAvx2, Isa::kAvx512}) {
    if (isa_available(isa)) out.push_back(isa);
  }
  return out;
}

void squared_distances(Isa isa, std::span<const double> query,
                       const BlockedPoints& points, std::span<double> out) {
  if (query.size() != points.dim()) {
    throw ValidationError("query has dimension " + std::to_string(query.size()) +
                          ", points have " + std::to_string(points.dim()));
  }
  if (out.size() < points.padded_size()) {
    throw ValidationError("distance buffer too small");
  }
  if (!isa_available(isa)) {
    throw ValidationError(std::string("kernel ") + std::string(isa_name(isa)) +
                          " is not available on this machine");
  }
  switch (isa) {
    case Isa::kScalar:
      internal::squared_distances_scalar(query.data(), points.data(),
                                         points.num_blocks(), points.dim(),
                                         out.data());
      return;
    case Isa::kAvx2:
#if defined(SELECTORLAB_BUILD_AVX2)
      internal::squared_distances_avx2(query.data(), points.data(),
                                       points.num_blocks(), points.dim(),
                                       out.data());
#endif
      return;
    case Isa::kAvx512:
#if defined(SELECTORLAB_BUILD_AVX512)
      internal::squared_distances_avx512(query.data(), points.data(),
                                         points.num_blocks(), points.dim(),
                                         out.data());
#endif
      return;
  }
}

void squared_distances(std::span<const double> query,
                       const BlockedPoints& points, std::span<double> out) {
  squared_distances(active_isa(), query, points, out);
}

}  // namespace selectorlab::simd
