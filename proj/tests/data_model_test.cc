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

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "selectorlab/binary_io.h"
#include "selectorlab/dataset.h"
#include "selectorlab/error.h"
#include "selectorlab/random.h"

namespace selectorlab {
namespace {

namespace fs = std::filesystem;

std::string data_path(const std::string& name) {
  return std::string(SELECTORLAB_TEST_DATA) + "/" + name;
}

// Writes SCF1 bytes field by field rather than through encode_binary.
std::string handmade_scf(std::uint64_t n, std::uint64_t d, std::uint64_t k,
                         const std::vector<float>& features,
                         const std::vector<float>& logits,
                         const std::vector<std::int64_t>& labels,
                         const std::vector<std::int64_t>& predictions = {}) {
  ByteWriter w;
  w.put_bytes("SCF1");
  w.put_u32(1);
  w.put_u64(n);
  w.put_u64(d);
  w.put_u64(k);
  w.put_u8(predictions.empty() ? 0 : 1);
  for (float v : features) w.put_f32(v);
  for (float v : logits) w.put_f32(v);
  for (auto v : labels) w.put_i64(v);
  for (auto v : predictions) w.put_i64(v);
  return w.release();
}

Dataset small(std::vector<std::int64_t> labels, std::vector<std::int64_t> preds,
              std::size_t dim = 1) {
  const std::size_t n = labels.size();
  std::vector<float> features(n * dim);
  for (std::size_t i = 0; i < features.size(); ++i) features[i] = static_cast<float>(i);
  std::vector<float> logits(n * 2, 0.0f);
  return Dataset::create("small", n, dim, 2, features, logits, std::move(labels),
                         std::move(preds));
}

TEST(BinaryFormat, DerivesPredictionsFromLogits) {
  const auto bytes = handmade_scf(2, 3, 2, {1, 2, 3, 4, 5, 6}, {1, 0, 0, 1}, {0, 1});
  const auto ds = decode_binary(bytes, "mem");
  EXPECT_EQ(ds.size(), 2u);
  EXPECT_FALSE(ds.predictions_supplied());
  EXPECT_EQ(std::vector<std::int64_t>(ds.predictions().begin(), ds.predictions().end()),
            (std::vector<std::int64_t>{0, 1}));
}

TEST(BinaryFormat, TiedLogitsPredictLowestClass) {
  const auto bytes = handmade_scf(1, 1, 2, {0}, {2, 2}, {1});
  EXPECT_EQ(decode_binary(bytes, "mem").predictions()[0], 0);
}

TEST(BinaryFormat, SuppliedPredictionsAreKept) {
  const auto bytes = handmade_scf(1, 1, 2, {0}, {5, 0}, {1}, {1});
  const auto ds = decode_binary(bytes, "mem");
  EXPECT_TRUE(ds.predictions_supplied());
  EXPECT_EQ(ds.predictions()[0], 1);
}

TEST(BinaryFormat, RoundTripIsBitExact) {
  Rng rng(3);
  const std::size_t n = 37, d = 5, k = 4;
  std::vector<float> f(n * d), l(n * k);
  std::vector<std::int64_t> y(n);
  for (auto& v : f) v = static_cast<float>(rng.normal() * 1e3);
  for (auto& v : l) v = static_cast<float>(rng.normal());
  for (auto& v : y) v = static_cast<std::int64_t>(rng.uniform_index(k));
  f[0] = -0.0f;
  f[1] = 1e-40f;  // subnormal
  const auto ds = Dataset::create("rt", n, d, k, f, l, y);
  const auto bytes = encode_binary(ds);
  const auto back = decode_binary(bytes, "mem", "rt");
  EXPECT_EQ(encode_binary(back), bytes);
  EXPECT_EQ(std::memcmp(back.features().data(), ds.features().data(), n * d * 4), 0);
  EXPECT_EQ(std::memcmp(back.logits().data(), ds.logits().data(), n * k * 4), 0);
  EXPECT_EQ(back, ds);

  const auto path = (fs::temp_directory_path() / "selectorlab_rt.scf").string();
  save_dataset(ds, path);
  EXPECT_EQ(read_file(path), bytes);
  fs::remove(path);
}

TEST(BinaryFormat, RejectsMalformedInput) {
  auto good = handmade_scf(1, 1, 2, {0}, {1, 0}, {0});
  std::string bad_magic = good;
  bad_magic[0] = 'X';
  EXPECT_THROW(decode_binary(bad_magic, "mem"), FormatError);
  EXPECT_THROW(decode_binary(good.substr(0, good.size() - 1), "mem"), FormatError);
  const auto nan_logit =
      handmade_scf(2, 1, 2, {0, 1}, {1, 0, std::nanf(""), 0}, {0, 0});
  try {
    decode_binary(nan_logit, "mem");
    FAIL() << "NaN payload accepted";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("row 1"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("offset"), std::string::npos) << e.what();
  }
  EXPECT_THROW(decode_binary(handmade_scf(1, 1, 2, {0}, {1, 0}, {2}), "mem"), FormatError);
}

TEST(CsvFormat, NanFeatureNamesTheRow) {
  const std::string text = "label,pred,f0,l0,l1\n0,,1,1,0\n1,,nan,0,1\n";
  try {
    decode_csv(text, "bad.csv");
    FAIL() << "NaN accepted";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("row 1"), std::string::npos) << e.what();
  }
}

TEST(CsvFormat, DimensionMismatchAndPartialPredictionsAreErrors) {
  EXPECT_THROW(decode_csv("label,pred,f0,l0,l1\n0,,1,1\n", "x"), FormatError);
  EXPECT_THROW(decode_csv("label,pred,f0,l0,l1\n0,0,1,1,0\n0,,1,1,0\n", "x"), FormatError);
  EXPECT_THROW(decode_csv("label,f0,l0,l1\n0,1,1,0\n", "x"), FormatError);
}

TEST(CsvFormat, RoundTripsThroughText) {
  const auto ds = load_dataset(data_path("ten_rows.csv"));
  EXPECT_EQ(ds.size(), 10u);
  EXPECT_EQ(ds.dim(), 2u);
  EXPECT_EQ(ds.num_classes(), 3u);
  const auto again = decode_csv(encode_csv(ds), ds.name());
  EXPECT_EQ(again, ds);
}

TEST(Dataset, RejectsInvariantViolations) {
  EXPECT_THROW(Dataset::create("x", 1, 1, 1, {0}, {0}, {0}), ValidationError);
  EXPECT_THROW(Dataset::create("x", 1, 1, 2, {0}, {0, 1}, {2}), ValidationError);
  EXPECT_THROW(Dataset::create("x", 1, 1, 2, {INFINITY}, {0, 1}, {0}), ValidationError);
  EXPECT_THROW(Dataset::create("x", 2, 1, 2, {0}, {0, 1}, {0}), ValidationError);
}

TEST(SplitByCorrectness, FollowsTheMask) {
  const auto ds = small({0, 1}, {0, 0});
  const auto parts = split_by_correctness(ds);
  ASSERT_EQ(parts.correct.size(), 1u);
  ASSERT_EQ(parts.wrong.size(), 1u);
  EXPECT_EQ(parts.correct.features(0, 0), 0.0);
  EXPECT_EQ(parts.wrong.features(0, 0), 1.0);
}

TEST(SplitByCorrectness, AllCorrectLeavesWrongEmpty) {
  const auto parts = split_by_correctness(small({0, 1, 1}, {0, 1, 1}));
  EXPECT_EQ(parts.wrong.size(), 0u);
  EXPECT_EQ(parts.mask.n_correct, 3u);
}

TEST(SplitByCorrectness, Counts) {
  const auto parts = split_by_correctness(small({1, 1, 0}, {1, 0, 0}));
  EXPECT_EQ(parts.mask.n_correct, 2u);
  EXPECT_EQ(parts.mask.n_wrong, 1u);
  EXPECT_EQ(parts.wrong.labels, (std::vector<std::int64_t>{1}));
}

TEST(SplitByCorrectness, InterleaveRestoresFeatures) {
  Rng rng(11);
  std::vector<std::int64_t> y(50), p(50);
  for (std::size_t i = 0; i < 50; ++i) {
    y[i] = static_cast<std::int64_t>(rng.uniform_index(2));
    p[i] = static_cast<std::int64_t>(rng.uniform_index(2));
  }
  const auto ds = small(y, p, 3);
  EXPECT_EQ(interleave(split_by_correctness(ds)), ds.feature_matrix());
}

TEST(MixDatasets, FullFractionsConcatenate) {
  const auto a = small(std::vector<std::int64_t>(100, 0), std::vector<std::int64_t>(100, 0));
  const auto b = small(std::vector<std::int64_t>(100, 1), std::vector<std::int64_t>(100, 0));
  MixSpec spec{{{std::cref(a), 1.0}, {std::cref(b), 1.0}}, 5, "both"};
  const auto mixed = mix_datasets(spec);
  EXPECT_EQ(mixed.size(), 200u);
  EXPECT_EQ(mixed.provenance()[0], 0);
  EXPECT_EQ(mixed.provenance()[199], 1);
}

TEST(MixDatasets, SameSeedSameBytes) {
  const auto src = load_dataset(data_path("ten_rows.csv"));
  MixSpec spec{{{std::cref(src), 0.3}, {std::cref(src), std::size_t{4}}}, 99, "m"};
  EXPECT_EQ(encode_binary(mix_datasets(spec)), encode_binary(mix_datasets(spec)));
}

TEST(MixDatasets, HalfOfTenRowsWithSeedSevenMatchesGolden) {
  const auto src = load_dataset(data_path("ten_rows.csv"));
  MixSpec spec{{{std::cref(src), 0.5}}, 7, "mixed"};
  const auto mixed = mix_datasets(spec);
  EXPECT_EQ(encode_csv(mixed), read_file(data_path("ten_rows_mix_half_seed7.csv")));
  // Feature f0 holds the source row index.
  std::vector<float> picked;
  for (std::size_t i = 0; i < mixed.size(); ++i) picked.push_back(mixed.feature_row(i)[0]);
  EXPECT_EQ(picked, (std::vector<float>{1, 2, 3, 5, 7}));
}

TEST(MixDatasets, RejectsIncompatibleSources) {
  const auto a = small({0}, {0}, 1);
  const auto b = small({0}, {0}, 2);
  MixSpec spec{{{std::cref(a), 1.0}, {std::cref(b), 1.0}}, 0, "m"};
  EXPECT_THROW(mix_datasets(spec), ValidationError);
  MixSpec too_many{{{std::cref(a), std::size_t{2}}}, 0, "m"};
  EXPECT_THROW(mix_datasets(too_many), ValidationError);
}

TEST(SubsampleLabeled, FullFractionIsIdentity) {
  const auto ds = load_dataset(data_path("ten_rows.csv"));
  EXPECT_EQ(subsample_labeled(ds, 1.0, 3), ds);
}

TEST(SubsampleLabeled, HalfOfFourKeepsOnePerClass) {
  const auto ds = small({0, 0, 1, 1}, {0, 0, 1, 1});
  const auto sub = subsample_labeled(ds, 0.5, 1);
  ASSERT_EQ(sub.size(), 2u);
  EXPECT_EQ(sub.labels()[0], 0);
  EXPECT_EQ(sub.labels()[1], 1);
}

TEST(SubsampleLabeled, DeterministicAndBounded) {
  const auto ds = load_dataset(data_path("ten_rows.csv"));
  EXPECT_EQ(subsample_labeled(ds, 0.4, 8), subsample_labeled(ds, 0.4, 8));
  EXPECT_THROW(subsample_labeled(ds, 0.05, 8), ValidationError);
  EXPECT_THROW(subsample_labeled(ds, 0.0, 8), ValidationError);
}

}  // namespace
}  // namespace selectorlab
