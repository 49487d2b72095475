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
#include <span>
#include <vector>

#include <gtest/gtest.h>

#include "selectorlab/dataset.h"
#include "selectorlab/error.h"
#include "selectorlab/logit_scores.h"

namespace selectorlab {
namespace {

std::span<const float> row(const std::vector<float>& v) { return v; }

Dataset logits_only(std::vector<float> logits, std::size_t k) {
  const std::size_t n = logits.size() / k;
  std::vector<std::int64_t> labels(n, 0);
  return Dataset::create("l", n, 1, k, std::vector<float>(n, 0.0f), std::move(logits),
                         std::move(labels));
}

TEST(Softmax, TwoClassLogTwo) {
  const std::vector<double> l{std::log(2.0), 0.0};
  const auto p = softmax(std::span<const double>(l));
  EXPECT_NEAR(p[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(p[1], 1.0 / 3.0, 1e-15);
}

TEST(Softmax, StableForHugeLogits) {
  const std::vector<float> l{1000.0f, 1000.0f, -1000.0f};
  const auto p = softmax(row(l));
  EXPECT_DOUBLE_EQ(p[0], 0.5);
  EXPECT_DOUBLE_EQ(p[2], 0.0);
}

TEST(Msp, KnownRow) {
  const std::vector<float> l{3, 1, 0};
  EXPECT_NEAR(msp_row(row(l)), 0.8437947344813395, 1e-15);
}

TEST(MaxLogit, PicksLargest) {
  const std::vector<float> l{-1, 4.5f, 2};
  EXPECT_EQ(max_logit_row(row(l)), 4.5);
}

TEST(Energy, UnitTemperature) {
  const std::vector<float> l{1, 2, 3};
  EXPECT_NEAR(energy_row(row(l), 1.0), 3.40760596444438, 1e-13);
}

TEST(Energy, TemperatureTwo) {
  const std::vector<float> l{1, 2, 3};
  EXPECT_NEAR(energy_row(row(l), 2.0), 4.360539341283469, 1e-13);
}

TEST(Energy, NoOverflowAtLargeLogits) {
  const std::vector<float> l{1000, 1000};
  EXPECT_NEAR(energy_row(row(l), 1.0), 1000.6931471805599, 1e-10);
}

TEST(Energy, RejectsNonPositiveTemperature) {
  const std::vector<float> l{1, 2};
  EXPECT_THROW(energy_row(row(l), 0.0), ValidationError);
  EXPECT_THROW(energy(logits_only({1, 2}, 2), -1.0), ValidationError);
}

TEST(RLog, MarginOfTopTwo) {
  const std::vector<float> l{0.5f, 3, -2, 1};
  EXPECT_EQ(rlog_row(row(l)), 2.0);
}

TEST(RLog, TiedTopIsZero) {
  const std::vector<float> l{2, 2, 1};
  EXPECT_EQ(rlog_row(row(l)), 0.0);
}

TEST(RLog, DoubleAndFloatAgreeOnRepresentableInput) {
  const std::vector<float> f{0.25f, -1.5f, 7.0f};
  const std::vector<double> d{0.25, -1.5, 7.0};
  EXPECT_EQ(rlog_row(row(f)), rlog_row(std::span<const double>(d)));
  EXPECT_EQ(msp_row(row(f)), msp_row(std::span<const double>(d)));
}

TEST(RLog, SingleLogitRejected) {
  const std::vector<float> l{1};
  EXPECT_THROW(rlog_row(row(l)), ValidationError);
}

TEST(DatasetScores, NamesAndValues) {
  const auto ds = logits_only({3, 1, 0, 0, 0, 0}, 3);
  const auto m = msp(ds);
  EXPECT_EQ(m.name, "msp");
  EXPECT_NEAR(m.values[0], 0.8437947344813395, 1e-15);
  EXPECT_NEAR(m.values[1], 1.0 / 3.0, 1e-15);
  EXPECT_EQ(rlog(ds).values, (std::vector<double>{2.0, 0.0}));
  EXPECT_EQ(max_logit(ds).values, (std::vector<double>{3.0, 0.0}));
  const auto e = energy(ds, 2.0);
  EXPECT_EQ(e.params.temperature, 2.0);
}

TEST(TailMass, RatioOfThirdToSecond) {
  const auto ds = logits_only({3, 1, 0}, 3);
  // p3 / p2 = exp(-1).
  EXPECT_NEAR(tail_mass_ratio(ds)[0], 0.36787944117144233, 1e-15);
}

TEST(TailMass, ZeroForBinary) {
  EXPECT_EQ(tail_mass_ratio(logits_only({1, 0}, 2))[0], 0.0);
}

}  // namespace
}  // namespace selectorlab
