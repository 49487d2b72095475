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

#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "selectorlab/binary_io.h"
#include "selectorlab/dataset.h"
#include "selectorlab/error.h"
#include "selectorlab/manifest.h"
#include "selectorlab/profiles.h"

namespace selectorlab {
namespace {

namespace fs = std::filesystem;

TEST(Profiles, ShippedFilesMatchBuiltins) {
  for (const auto& name : builtin_profile_names()) {
    const std::string path = std::string(SELECTORLAB_PROFILE_DIR) + "/" + name + ".json";
    EXPECT_EQ(load_profile(path), builtin_profile(name)) << path;
  }
}

TEST(Profiles, JsonRoundTrip) {
  const auto p = builtin_profile("language");
  EXPECT_EQ(parse_profile(profile_to_json(p), "mem"), p);
}

TEST(Profiles, Lookups) {
  const auto p = builtin_profile("vision-clip");
  EXPECT_EQ(p.lambda_for("delta-mds-rlog"), 10000.0);
  EXPECT_EQ(p.k_for("delta-knn"), 25u);
  EXPECT_FALSE(p.lambda_for("msp-rlog").has_value());
}

TEST(Profiles, Errors) {
  EXPECT_THROW(builtin_profile("audio"), ValidationError);
  EXPECT_THROW(load_profile("/no/such/profile.json"), ValidationError);
  EXPECT_THROW(parse_profile("{\"name\":\"x\",\"k\":{\"knn\":0}}", "mem"), ValidationError);
  EXPECT_THROW(parse_profile("not json", "mem"), ValidationError);
}

class ManifestTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / "selectorlab_manifest_test";
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    fs::copy_file(std::string(SELECTORLAB_TEST_DATA) + "/ten_rows.csv", dir_ / "ten.csv");
    std::ofstream(dir_ / "m.json") << R"({
      "datasets": [{"name": "ten", "path": "ten.csv"}],
      "mixes": [
        {"name": "half", "seed": 7, "sources": [{"dataset": "ten", "fraction": 0.5}]},
        {"name": "nested", "seed": 1, "sources": [{"dataset": "half", "count": 2},
                                                 {"dataset": "ten", "count": 3}]}
      ],
      "synthetic": [{
        "name": "blobs", "dim": 1, "n": 50, "seed": 4, "prior_correct": 0.7,
        "correct": {"components": [{"mean": [0], "variance": 1}]},
        "wrong": {"mode": "hard-assign",
                  "components": [{"mean": [3], "covariance": [[2]], "label": 1}]}
      }]
    })";
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST_F(ManifestTest, ResolvesDatasetsMixesAndSynthetic) {
  const auto m = load_manifest((dir_ / "m.json").string());
  EXPECT_TRUE(m.contains("nested"));
  EXPECT_EQ(m.resolve("ten").size(), 10u);
  EXPECT_EQ(encode_csv(m.resolve("half")),
            read_file(std::string(SELECTORLAB_TEST_DATA) + "/ten_rows_mix_half_seed7.csv"));
  EXPECT_EQ(m.resolve("nested").size(), 5u);
  const auto blobs = m.resolve("blobs");
  EXPECT_EQ(blobs.size(), 50u);
  EXPECT_EQ(m.synthetic_spec("blobs").spec.wrong_density.mode(), DensityMode::kHardAssign);
  EXPECT_THROW(m.resolve("missing"), ValidationError);
}

TEST_F(ManifestTest, DatasetRefSyntax) {
  const auto via_ref = load_dataset_ref((dir_ / "m.json").string() + "#half");
  EXPECT_EQ(via_ref.size(), 5u);
  EXPECT_EQ(load_dataset_ref((dir_ / "ten.csv").string()).size(), 10u);
}

TEST(Manifest, RejectsDuplicatesAndCycles) {
  EXPECT_THROW(parse_manifest(R"({"datasets":[{"name":"a","path":"x"},{"name":"a","path":"y"}]})",
                              "mem", "."),
               ValidationError);
  const auto cyclic = parse_manifest(
      R"({"mixes":[{"name":"a","sources":[{"dataset":"b"}]},{"name":"b","sources":[{"dataset":"a"}]}]})",
      "mem", ".");
  EXPECT_THROW(cyclic.resolve("a"), ValidationError);
  EXPECT_THROW(parse_manifest(R"({"mixes":[{"name":"a","sources":[{"dataset":"b","count":1,"fraction":0.5}]}]})",
                              "mem", "."),
               ValidationError);
}

}  // namespace
}  // namespace selectorlab
