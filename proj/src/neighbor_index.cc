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

#include "selectorlab/neighbor_index.h"

#include <algorithm>
#include <cmath>

#include "selectorlab/binary_io.h"
#include "selectorlab/error.h"

namespace selectorlab {
namespace {
constexpr std::string_view kMagic = "SNN1";
constexpr std::uint32_t kVersion = 1;
}  // namespace

void normalize_in_place(std::span<double> v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  const double norm = std::sqrt(sq);
  if (!(norm > 0.0)) throw ValidationError("cannot normalize a zero-norm vector");
  for (double& x : v) x /= norm;
}

NeighborIndex NeighborIndex::build(const RowMatrix& points, bool normalize) {
  if (points.rows() < 1) {
    throw ValidationError("neighbor index needs at least one point");
  }
  RowMatrix stored = points;
  if (normalize) {
    for (Eigen::Index i = 0; i < stored.rows(); ++i) {
      double* row = stored.row(i).data();
      try {
        normalize_in_place(std::span<double>(row, static_cast<std::size_t>(stored.cols())));
      } catch (const ValidationError&) {
        throw ValidationError("row " + std::to_string(i) +
                              " has zero norm and cannot be normalized");
      }
    }
  }
  NeighborIndex index;
  index.points_ = simd::BlockedPoints(stored);
  index.normalized_ = normalize;
  return index;
}

void NeighborIndex::check_k(std::size_t k) const {
  if (k < 1 || k > size()) {
    throw ValidationError("k=" + std::to_string(k) + " is outside [1, M] for M=" +
                          std::to_string(size()) + " indexed points");
  }
}

void NeighborIndex::nearest_distances(std::span<const double> z, std::size_t k,
                                      simd::Isa isa,
                                      std::vector<double>& scratch,
                                      std::vector<double>& query,
                                      std::span<double> out) const {
  check_k(k);
  if (z.size() != dim()) {
    throw ValidationError("query has dimension " + std::to_string(z.size()) +
                          ", index has " + std::to_string(dim()));
  }
  query.assign(z.begin(), z.end());
  if (normalized_) normalize_in_place(query);
  scratch.resize(points_.padded_size());
  simd::squared_distances(isa, query, points_, scratch);
  const auto first = scratch.begin();
  const auto last = first + static_cast<std::ptrdiff_t>(size());
  const auto kth = first + static_cast<std::ptrdiff_t>(k);
  if (k < size()) std::nth_element(first, kth - 1, last);
  std::sort(first, kth);
  for (std::size_t i = 0; i < k; ++i) out[i] = std::sqrt(scratch[i]);
}

std::vector<double> NeighborIndex::nearest_distances(std::span<const double> z,
                                                     std::size_t k,
                                                     simd::Isa isa) const {
  std::vector<double> scratch;
  std::vector<double> query;
  std::vector<double> out(k);
  nearest_distances(z, k, isa, scratch, query, out);
  return out;
}

std::vector<double> NeighborIndex::nearest_distances(std::span<const double> z,
                                                     std::size_t k) const {
  return nearest_distances(z, k, simd::active_isa());
}

std::string NeighborIndex::encode() const {
  ByteWriter w;
  w.put_bytes(kMagic);
  w.put_u32(kVersion);
  w.put_u8(normalized_ ? 1 : 0);
  w.put_u64(size());
  w.put_u64(dim());
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < dim(); ++j) w.put_f64(points_.at(i, j));
  }
  return w.release();
}

NeighborIndex NeighborIndex::decode(std::string_view bytes,
                                    const std::string& source) {
  ByteReader r(bytes, source);
  r.expect_magic(kMagic);
  const std::uint32_t version = r.get_u32();
  if (version != kVersion) r.fail("unsupported version " + std::to_string(version));
  const std::uint8_t flags = r.get_u8();
  if (flags > 1) r.fail("unknown flag bits");
  const std::uint64_t m = r.get_u64();
  const std::uint64_t d = r.get_u64();
  if (m < 1 || d < 1) r.fail("empty index");
  if (8.0L * m * d != static_cast<long double>(r.remaining())) {
    r.fail("payload size does not match M=" + std::to_string(m) +
           ", d=" + std::to_string(d));
  }
  RowMatrix pts(m, d);
  for (Eigen::Index i = 0; i < pts.size(); ++i) pts.data()[i] = r.get_f64();
  NeighborIndex index;
  index.points_ = simd::BlockedPoints(pts);
  index.normalized_ = flags & 1;
  return index;
}

}  // namespace selectorlab
