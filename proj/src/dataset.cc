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

#include "selectorlab/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "selectorlab/atomic_file.h"
#include "selectorlab/binary_io.h"
#include "selectorlab/error.h"
#include "selectorlab/random.h"

namespace selectorlab {
namespace {

constexpr std::string_view kMagic = "SCF1";
constexpr std::uint32_t kVersion = 1;
constexpr std::uint8_t kFlagPredictions = 0x1;
constexpr std::uint8_t kFlagProvenance = 0x2;

std::string row_error(std::size_t row, const std::string& what) {
  return "row " + std::to_string(row) + ": " + what;
}

void check_finite(std::span<const float> values, std::size_t width,
                  const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw ValidationError(row_error(
          i / width, std::string(what) + " column " +
                         std::to_string(i % width) + " is not finite"));
    }
  }
}

}  // namespace

std::size_t argmax(std::span<const float> row) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < row.size(); ++k) {
    if (row[k] > row[best]) best = k;
  }
  return best;
}

Dataset Dataset::create(std::string name, std::size_t n, std::size_t dim,
                        std::size_t num_classes, std::vector<float> features,
                        std::vector<float> logits,
                        std::vector<std::int64_t> labels,
                        std::vector<std::int64_t> predictions) {
  if (n < 1) throw ValidationError("dataset must have at least one sample");
  if (dim < 1) throw ValidationError("feature dimension must be at least 1");
  if (num_classes < 2) throw ValidationError("need at least 2 classes");
  if (features.size() != n * dim) {
    throw ValidationError("features hold " + std::to_string(features.size()) +
                          " values, expected N*d = " + std::to_string(n * dim));
  }
  if (logits.size() != n * num_classes) {
    throw ValidationError("logits hold " + std::to_string(logits.size()) +
                          " values, expected N*K = " +
                          std::to_string(n * num_classes));
  }
  if (labels.size() != n) {
    throw ValidationError("labels hold " + std::to_string(labels.size()) +
                          " values, expected N = " + std::to_string(n));
  }
  const bool supplied = !predictions.empty();
  if (supplied && predictions.size() != n) {
    throw ValidationError("predictions hold " +
                          std::to_string(predictions.size()) +
                          " values, expected N = " + std::to_string(n));
  }
  check_finite(features, dim, "feature");
  check_finite(logits, num_classes, "logit");
  const auto k = static_cast<std::int64_t>(num_classes);
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] < 0 || labels[i] >= k) {
      throw ValidationError(row_error(i, "label " + std::to_string(labels[i]) +
                                             " outside [0, K)"));
    }
    if (supplied && (predictions[i] < 0 || predictions[i] >= k)) {
      throw ValidationError(row_error(
          i, "prediction " + std::to_string(predictions[i]) + " outside [0, K)"));
    }
  }

  Dataset ds;
  ds.name_ = std::move(name);
  ds.n_ = n;
  ds.dim_ = dim;
  ds.num_classes_ = num_classes;
  ds.features_ = std::move(features);
  ds.logits_ = std::move(logits);
  ds.labels_ = std::move(labels);
  ds.predictions_supplied_ = supplied;
  if (supplied) {
    ds.predictions_ = std::move(predictions);
  } else {
    ds.predictions_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      ds.predictions_[i] = static_cast<std::int64_t>(argmax(ds.logit_row(i)));
    }
  }
  return ds;
}

Dataset Dataset::with_name(std::string name) const {
  Dataset out = *this;
  out.name_ = std::move(name);
  return out;
}

Dataset Dataset::with_provenance(std::vector<std::int64_t> provenance) const {
  if (!provenance.empty() && provenance.size() != n_) {
    throw ValidationError("provenance length does not match N");
  }
  Dataset out = *this;
  out.provenance_ = std::move(provenance);
  return out;
}

Dataset Dataset::select_rows(std::span<const std::size_t> rows) const {
  if (rows.empty()) throw ValidationError("cannot select zero rows");
  std::vector<float> f;
  std::vector<float> l;
  std::vector<std::int64_t> y;
  std::vector<std::int64_t> p;
  std::vector<std::int64_t> src;
  f.reserve(rows.size() * dim_);
  l.reserve(rows.size() * num_classes_);
  for (std::size_t r : rows) {
    if (r >= n_) throw ValidationError("row index out of range");
    auto fr = feature_row(r);
    auto lr = logit_row(r);
    f.insert(f.end(), fr.begin(), fr.end());
    l.insert(l.end(), lr.begin(), lr.end());
    y.push_back(labels_[r]);
    if (predictions_supplied_) p.push_back(predictions_[r]);
    if (!provenance_.empty()) src.push_back(provenance_[r]);
  }
  Dataset out = create(name_, rows.size(), dim_, num_classes_, std::move(f),
                       std::move(l), std::move(y), std::move(p));
  out.provenance_ = std::move(src);
  return out;
}

RowMatrix Dataset::feature_matrix() const {
  RowMatrix m(n_, dim_);
  for (std::size_t i = 0; i < n_ * dim_; ++i) m.data()[i] = features_[i];
  return m;
}

DataFormat format_for_path(std::string_view path) {
  return path.ends_with(".csv") ? DataFormat::kCsv : DataFormat::kBinary;
}

std::string encode_binary(const Dataset& ds) {
  ByteWriter w;
  w.put_bytes(kMagic);
  w.put_u32(kVersion);
  w.put_u64(ds.size());
  w.put_u64(ds.dim());
  w.put_u64(ds.num_classes());
  std::uint8_t flags = 0;
  if (ds.predictions_supplied()) flags |= kFlagPredictions;
  if (!ds.provenance().empty()) flags |= kFlagProvenance;
  w.put_u8(flags);
  for (float v : ds.features()) w.put_f32(v);
  for (float v : ds.logits()) w.put_f32(v);
  for (auto v : ds.labels()) w.put_i64(v);
  if (ds.predictions_supplied()) {
    for (auto v : ds.predictions()) w.put_i64(v);
  }
  for (auto v : ds.provenance()) w.put_i64(v);
  return w.release();
}

Dataset decode_binary(std::string_view bytes, const std::string& source,
                      std::string name) {
  ByteReader r(bytes, source);
  r.expect_magic(kMagic);
  const std::uint32_t version = r.get_u32();
  if (version != kVersion) r.fail("unsupported version " + std::to_string(version));
  const std::uint64_t n = r.get_u64();
  const std::uint64_t d = r.get_u64();
  const std::uint64_t k = r.get_u64();
  const std::uint8_t flags = r.get_u8();
  if (flags & ~(kFlagPredictions | kFlagProvenance)) {
    r.fail("unknown flag bits " + std::to_string(flags));
  }
  if (n < 1 || d < 1 || k < 2) {
    r.fail("header dimensions N=" + std::to_string(n) + " d=" +
           std::to_string(d) + " K=" + std::to_string(k) +
           " violate N>=1, d>=1, K>=2");
  }
  // Compare payload size in long double to sidestep overflow on hostile
  // headers before allocating anything.
  const long double int_arrays = 1 + ((flags & kFlagPredictions) ? 1 : 0) +
                                 ((flags & kFlagProvenance) ? 1 : 0);
  const long double expected =
      4.0L * n * d + 4.0L * n * k + 8.0L * n * int_arrays;
  if (expected != static_cast<long double>(r.remaining())) {
    r.fail("payload is " + std::to_string(r.remaining()) +
           " bytes but header N, d, K and flags imply " +
           std::to_string(static_cast<unsigned long long>(expected)));
  }

  std::vector<float> features(n * d);
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::size_t row_offset = r.offset();
    for (std::uint64_t j = 0; j < d; ++j) {
      const float v = r.get_f32();
      if (!std::isfinite(v)) {
        throw FormatError(source + ": " +
                          row_error(i, "feature " + std::to_string(j) +
                                           " is not finite") +
                          " (row starts at byte offset " +
                          std::to_string(row_offset) + ")");
      }
      features[i * d + j] = v;
    }
  }
  std::vector<float> logits(n * k);
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::size_t row_offset = r.offset();
    for (std::uint64_t j = 0; j < k; ++j) {
      const float v = r.get_f32();
      if (!std::isfinite(v)) {
        throw FormatError(source + ": " +
                          row_error(i, "logit " + std::to_string(j) +
                                           " is not finite") +
                          " (row starts at byte offset " +
                          std::to_string(row_offset) + ")");
      }
      logits[i * k + j] = v;
    }
  }
  auto read_ints = [&](const char* what) {
    std::vector<std::int64_t> out(n);
    for (std::uint64_t i = 0; i < n; ++i) {
      const std::int64_t v = r.get_i64();
      if (v < 0 || (std::string_view(what) != "provenance" &&
                    v >= static_cast<std::int64_t>(k))) {
        r.fail(row_error(i, std::string(what) + " " + std::to_string(v) +
                                " out of range"));
      }
      out[i] = v;
    }
    return out;
  };
  auto labels = read_ints("label");
  std::vector<std::int64_t> predictions;
  if (flags & kFlagPredictions) predictions = read_ints("prediction");
  std::vector<std::int64_t> provenance;
  if (flags & kFlagProvenance) provenance = read_ints("provenance");

  Dataset ds = Dataset::create(name.empty() ? source : std::move(name), n, d, k,
                               std::move(features), std::move(logits),
                               std::move(labels), std::move(predictions));
  return ds.with_provenance(std::move(provenance));
}

namespace {

void append_float(std::string& out, float v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

// Counts a run of `prefix0, prefix1, ...` columns starting at `pos`.
std::size_t count_indexed(const std::vector<std::string_view>& cols,
                          std::size_t pos, char prefix) {
  std::size_t count = 0;
  while (pos + count < cols.size() &&
         cols[pos + count] == std::string(1, prefix) + std::to_string(count)) {
    ++count;
  }
  return count;
}

}  // namespace

std::string encode_csv(const Dataset& ds) {
  std::string out = "label,pred";
  for (std::size_t j = 0; j < ds.dim(); ++j) out += ",f" + std::to_string(j);
  for (std::size_t j = 0; j < ds.num_classes(); ++j) out += ",l" + std::to_string(j);
  out += '\n';
  for (std::size_t i = 0; i < ds.size(); ++i) {
    out += std::to_string(ds.labels()[i]);
    out += ',';
    if (ds.predictions_supplied()) out += std::to_string(ds.predictions()[i]);
    for (float v : ds.feature_row(i)) {
      out += ',';
      append_float(out, v);
    }
    for (float v : ds.logit_row(i)) {
      out += ',';
      append_float(out, v);
    }
    out += '\n';
  }
  return out;
}

Dataset decode_csv(std::string_view text, const std::string& source,
                   std::string name) {
  std::vector<std::string_view> lines = split(text, '\n');
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw FormatError(source + ": empty CSV file");

  std::vector<std::string_view> header = split(trim(lines[0]), ',');
  for (auto& h : header) h = trim(h);
  if (header.size() < 2 || header[0] != "label" || header[1] != "pred") {
    throw FormatError(source + ": header must start with label,pred");
  }
  const std::size_t d = count_indexed(header, 2, 'f');
  const std::size_t k = count_indexed(header, 2 + d, 'l');
  if (d < 1 || k < 2 || 2 + d + k != header.size()) {
    throw FormatError(source +
                      ": header must be label,pred,f0..f{d-1},l0..l{K-1} with "
                      "d>=1 and K>=2");
  }

  const std::size_t n = lines.size() - 1;
  if (n < 1) throw FormatError(source + ": no data rows");
  std::vector<float> features(n * d);
  std::vector<float> logits(n * k);
  std::vector<std::int64_t> labels(n);
  std::vector<std::int64_t> predictions;
  std::optional<bool> has_pred;

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t line_no = i + 2;
    auto fail = [&](const std::string& what) -> void {
      throw FormatError(source + ": " + row_error(i, what) + " (line " +
                        std::to_string(line_no) + ")");
    };
    std::vector<std::string_view> cols = split(trim(lines[i + 1]), ',');
    if (cols.size() != header.size()) {
      fail("has " + std::to_string(cols.size()) + " columns, header has " +
           std::to_string(header.size()));
    }
    auto parse_int = [&](std::string_view s, const char* what) {
      s = trim(s);
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size()) {
        fail(std::string("cannot parse ") + what + " \"" + std::string(s) + "\"");
      }
      return v;
    };
    auto parse_float = [&](std::string_view s, const std::string& what) {
      s = trim(s);
      float v = 0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size()) {
        fail("cannot parse " + what + " \"" + std::string(s) + "\"");
      }
      if (!std::isfinite(v)) fail(what + " is not finite");
      return v;
    };
    labels[i] = parse_int(cols[0], "label");
    const bool pred_here = !trim(cols[1]).empty();
    if (!has_pred) has_pred = pred_here;
    if (*has_pred != pred_here) {
      fail("pred column must be filled on every row or on none");
    }
    if (pred_here) predictions.push_back(parse_int(cols[1], "pred"));
    for (std::size_t j = 0; j < d; ++j) {
      features[i * d + j] = parse_float(cols[2 + j], "feature f" + std::to_string(j));
    }
    for (std::size_t j = 0; j < k; ++j) {
      logits[i * k + j] = parse_float(cols[2 + d + j], "logit l" + std::to_string(j));
    }
  }
  try {
    return Dataset::create(name.empty() ? source : std::move(name), n, d, k,
                           std::move(features), std::move(logits),
                           std::move(labels), std::move(predictions));
  } catch (const ValidationError& e) {
    throw FormatError(source + ": " + e.what());
  }
}

Dataset load_dataset(const std::string& path, DataFormat format) {
  const std::string bytes = read_file(path);
  return format == DataFormat::kCsv ? decode_csv(bytes, path)
                                    : decode_binary(bytes, path);
}

Dataset load_dataset(const std::string& path) {
  return load_dataset(path, format_for_path(path));
}

void save_dataset(const Dataset& ds, const std::string& path, DataFormat format) {
  write_file_atomic(path, format == DataFormat::kCsv ? encode_csv(ds)
                                                     : encode_binary(ds));
}

void save_dataset(const Dataset& ds, const std::string& path) {
  save_dataset(ds, path, format_for_path(path));
}

CorrectnessMask correctness(const Dataset& ds) {
  CorrectnessMask m;
  m.mask.resize(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    m.mask[i] = ds.predictions()[i] == ds.labels()[i];
    if (m.mask[i]) {
      ++m.n_correct;
    } else {
      ++m.n_wrong;
    }
  }
  return m;
}

PartitionedFeatures split_by_correctness(const Dataset& ds) {
  PartitionedFeatures out;
  out.mask = correctness(ds);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    Partition& p = out.mask.mask[i] ? out.correct : out.wrong;
    p.rows.push_back(i);
    p.labels.push_back(ds.labels()[i]);
  }
  for (Partition* p : {&out.correct, &out.wrong}) {
    p->features.resize(static_cast<Eigen::Index>(p->rows.size()),
                       static_cast<Eigen::Index>(ds.dim()));
    for (std::size_t r = 0; r < p->rows.size(); ++r) {
      auto src = ds.feature_row(p->rows[r]);
      for (std::size_t j = 0; j < ds.dim(); ++j) p->features(r, j) = src[j];
    }
  }
  return out;
}

RowMatrix interleave(const PartitionedFeatures& parts) {
  const std::size_t n = parts.mask.mask.size();
  const Eigen::Index d = parts.correct.size() > 0 ? parts.correct.features.cols()
                                                  : parts.wrong.features.cols();
  RowMatrix out(static_cast<Eigen::Index>(n), d);
  std::size_t ci = 0;
  std::size_t wi = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (parts.mask.mask[i]) {
      out.row(i) = parts.correct.features.row(ci++);
    } else {
      out.row(i) = parts.wrong.features.row(wi++);
    }
  }
  return out;
}

std::size_t rows_for_fraction(double fraction, std::size_t n) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ValidationError("fraction " + std::to_string(fraction) +
                          " outside (0, 1]");
  }
  const auto rows = static_cast<std::size_t>(std::llround(fraction * n));
  return std::clamp<std::size_t>(rows, 1, n);
}

Dataset mix_datasets(const MixSpec& spec) {
  if (spec.sources.empty()) throw ValidationError("mix needs at least one source");
  const Dataset& first = spec.sources.front().dataset.get();
  std::vector<float> features;
  std::vector<float> logits;
  std::vector<std::int64_t> labels;
  std::vector<std::int64_t> predictions;
  std::vector<std::int64_t> provenance;
  bool all_supplied = true;
  for (const auto& src : spec.sources) {
    all_supplied = all_supplied && src.dataset.get().predictions_supplied();
  }

  for (std::size_t s = 0; s < spec.sources.size(); ++s) {
    const Dataset& ds = spec.sources[s].dataset.get();
    if (ds.dim() != first.dim() || ds.num_classes() != first.num_classes()) {
      throw ValidationError(
          "mix source " + std::to_string(s) + " (" + ds.name() + ") has d=" +
          std::to_string(ds.dim()) + ", K=" + std::to_string(ds.num_classes()) +
          " but source 0 has d=" + std::to_string(first.dim()) +
          ", K=" + std::to_string(first.num_classes()));
    }
    std::size_t count = 0;
    if (const auto* c = std::get_if<std::size_t>(&spec.sources[s].amount)) {
      count = *c;
      if (count < 1 || count > ds.size()) {
        throw ValidationError("mix source " + std::to_string(s) + ": count " +
                              std::to_string(count) + " not in [1, " +
                              std::to_string(ds.size()) + "]");
      }
    } else {
      count = rows_for_fraction(std::get<double>(spec.sources[s].amount), ds.size());
    }
    std::vector<std::size_t> rows;
    if (count == ds.size()) {
      rows.resize(count);
      for (std::size_t i = 0; i < count; ++i) rows[i] = i;
    } else {
      Rng rng = Rng::derive(spec.seed, s);
      rows = rng.sample_without_replacement(ds.size(), count);
    }
    for (std::size_t r : rows) {
      auto fr = ds.feature_row(r);
      auto lr = ds.logit_row(r);
      features.insert(features.end(), fr.begin(), fr.end());
      logits.insert(logits.end(), lr.begin(), lr.end());
      labels.push_back(ds.labels()[r]);
      if (all_supplied) predictions.push_back(ds.predictions()[r]);
      provenance.push_back(static_cast<std::int64_t>(s));
    }
  }
  const std::size_t n = labels.size();
  Dataset out = Dataset::create(spec.name, n, first.dim(), first.num_classes(),
                                std::move(features), std::move(logits),
                                std::move(labels), std::move(predictions));
  return out.with_provenance(std::move(provenance));
}

Dataset subsample_labeled(const Dataset& ds, double fraction,
                          std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ValidationError("labeled fraction " + std::to_string(fraction) +
                          " outside (0, 1]");
  }
  if (fraction * static_cast<double>(ds.size()) < 1.0) {
    throw ValidationError("labeled fraction " + std::to_string(fraction) +
                          " of " + std::to_string(ds.size()) +
                          " samples keeps less than one sample");
  }
  if (fraction == 1.0) return ds;

  std::map<std::int64_t, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < ds.size(); ++i) by_class[ds.labels()[i]].push_back(i);

  std::vector<std::size_t> keep;
  for (const auto& [label, rows] : by_class) {
    const std::size_t count = rows_for_fraction(fraction, rows.size());
    Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(label));
    for (std::size_t pick : rng.sample_without_replacement(rows.size(), count)) {
      keep.push_back(rows[pick]);
    }
  }
  std::sort(keep.begin(), keep.end());
  return ds.select_rows(keep);
}

}  // namespace selectorlab
