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

#ifndef SELECTORLAB_NEIGHBOR_INDEX_H_
#define SELECTORLAB_NEIGHBOR_INDEX_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "selectorlab/dataset.h"
#include "selectorlab/simd/blocked_points.h"
#include "selectorlab/simd/distance_kernels.h"

namespace selectorlab {

// Exact Euclidean k-nearest-neighbor search by brute force. Points are
// optionally L2-normalized at build time; queries against a normalized index
// are normalized the same way.
class NeighborIndex {
 public:
  NeighborIndex() = default;

  // Throws on an empty point set, or on a zero-norm row when normalizing.
  static NeighborIndex build(const RowMatrix& points, bool normalize);

  std::size_t size() const { return points_.size(); }
  std::size_t dim() const { return points_.dim(); }
  bool normalized() const { return normalized_; }
  const simd::BlockedPoints& points() const { return points_; }

  // The k smallest distances from z, ascending. 1 <= k <= size().
  std::vector<double> nearest_distances(std::span<const double> z,
                                        std::size_t k) const;
  std::vector<double> nearest_distances(std::span<const double> z,
                                        std::size_t k, simd::Isa isa) const;

  // Scratch-buffer variant for hot loops; `scratch` is resized as needed.
  void nearest_distances(std::span<const double> z, std::size_t k,
                         simd::Isa isa, std::vector<double>& scratch,
                         std::vector<double>& query,
                         std::span<double> out) const;

  // "SNN1" | u32 version=1 | u8 flags (bit0 normalized) | u64 M | u64 d
  // | f64 points[M*d]
  std::string encode() const;
  static NeighborIndex decode(std::string_view bytes, const std::string& source);

 private:
  void check_k(std::size_t k) const;

  simd::BlockedPoints points_;
  bool normalized_ = false;
};

// Divides by the L2 norm; throws on a zero-norm vector.
void normalize_in_place(std::span<double> v);

}  // namespace selectorlab

#endif  // SELECTORLAB_NEIGHBOR_INDEX_H_
