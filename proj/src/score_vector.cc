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

#include "selectorlab/score_vector.h"

#include <charconv>
#include <cmath>

#include "selectorlab/atomic_file.h"
#include "selectorlab/binary_io.h"
#include "selectorlab/error.h"

namespace selectorlab {
namespace {
constexpr std::string_view kMagic = "SCB1";
constexpr std::uint32_t kVersion = 1;
}  // namespace

std::string_view method_name(ScoreMethod method) {
  switch (method) {
    case ScoreMethod::kMsp: return "msp";
    case ScoreMethod::kMaxLogit: return "max-logit";
    case ScoreMethod::kEnergy: return "energy";
    case ScoreMethod::kRLog: return "rlog";
    case ScoreMethod::kMds: return "mds";
    case ScoreMethod::kKnn: return "knn";
    case ScoreMethod::kSirc: return "sirc";
    case ScoreMethod::kDeltaMds: return "delta-mds";
    case ScoreMethod::kDeltaKnn: return "delta-knn";
    case ScoreMethod::kCombination: return "combination";
    case ScoreMethod::kExternal: return "external";
  }
  return "unknown";
}

void ScoreVector::check_finite() const {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw ValidationError("score '" + name + "' is not finite at index " +
                            std::to_string(i));
    }
  }
}

ScoreVector external_scores(std::string name, std::vector<double> values) {
  ScoreVector s;
  s.values = std::move(values);
  s.name = std::move(name);
  s.method = ScoreMethod::kExternal;
  return s;
}

std::string encode_scores_csv(const ScoreVector& scores) {
  std::string out = "index,score\n";
  char buf[32];
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    auto res = std::to_chars(buf, buf + sizeof(buf), scores.values[i]);
    out.append(buf, res.ptr);
    out += '\n';
  }
  return out;
}

void ScoreBundle::append(ScoreVector column) {
  if (columns.empty() && n == 0) n = column.size();
  if (column.size() != n) {
    throw ValidationError("bundle column '" + column.name + "' has " +
                          std::to_string(column.size()) + " values, bundle has N=" +
                          std::to_string(n));
  }
  for (const auto& c : columns) {
    if (c.name == column.name) {
      throw ValidationError("duplicate bundle column '" + column.name + "'");
    }
  }
  columns.push_back(std::move(column));
}

const ScoreVector& ScoreBundle::column(std::string_view name) const {
  for (const auto& c : columns) {
    if (c.name == name) return c;
  }
  throw ValidationError("bundle has no column '" + std::string(name) + "'");
}

std::string encode_bundle(const ScoreBundle& bundle) {
  ByteWriter w;
  w.put_bytes(kMagic);
  w.put_u32(kVersion);
  w.put_u64(bundle.n);
  w.put_u32(static_cast<std::uint32_t>(bundle.columns.size()));
  w.put_u32(static_cast<std::uint32_t>(bundle.metadata_json.size()));
  w.put_bytes(bundle.metadata_json);
  for (const auto& c : bundle.columns) {
    w.put_u32(static_cast<std::uint32_t>(c.name.size()));
    w.put_bytes(c.name);
    for (double v : c.values) w.put_f64(v);
  }
  return w.release();
}

ScoreBundle decode_bundle(std::string_view bytes, const std::string& source) {
  ByteReader r(bytes, source);
  r.expect_magic(kMagic);
  const std::uint32_t version = r.get_u32();
  if (version != kVersion) r.fail("unsupported version " + std::to_string(version));
  ScoreBundle b;
  b.n = r.get_u64();
  const std::uint32_t columns = r.get_u32();
  const std::uint32_t meta_len = r.get_u32();
  b.metadata_json = std::string(r.get_bytes(meta_len));
  for (std::uint32_t c = 0; c < columns; ++c) {
    const std::uint32_t name_len = r.get_u32();
    ScoreVector col;
    col.name = std::string(r.get_bytes(name_len));
    if (r.remaining() / 8 < b.n) r.fail("column '" + col.name + "' is truncated");
    col.values.resize(b.n);
    for (auto& v : col.values) v = r.get_f64();
    b.columns.push_back(std::move(col));
  }
  if (r.remaining() != 0) r.fail("trailing bytes after last column");
  return b;
}

ScoreBundle load_bundle(const std::string& path) {
  return decode_bundle(read_file(path), path);
}

void save_bundle(const ScoreBundle& bundle, const std::string& path) {
  write_file_atomic(path, encode_bundle(bundle));
}

}  // namespace selectorlab
