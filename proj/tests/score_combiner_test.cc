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
#include <vector>

#include <gtest/gtest.h>

#include "selectorlab/dataset.h"
#include "selectorlab/error.h"
#include "selectorlab/score_combiner.h"
#include "selectorlab/score_vector.h"
#include "selectorlab/sirc.h"

namespace selectorlab {
namespace {

TEST(Combine, WeightedSum) {
  const auto a = external_scores("delta-mds", {1, 2, 3});
  const auto b = external_scores("rlog", {10, 0, -10});
  const auto t = combine(a, b, 0.5);
  EXPECT_EQ(t.values, (std::vector<double>{6, 2, -2}));
  EXPECT_EQ(t.name, "delta-mds-rlog");
  EXPECT_EQ(t.params.lambda, 0.5);
  EXPECT_EQ(t.method, ScoreMethod::kCombination);
}

TEST(Combine, ZeroLambdaKeepsFirst) {
  const auto a = external_scores("a", {1, -2});
  const auto b = external_scores("b", {5, 7});
  EXPECT_EQ(combine(a, b, 0.0).values, a.values);
}

TEST(Combine, RejectsMismatch) {
  EXPECT_THROW(combine(external_scores("a", {1}), external_scores("b", {1, 2}), 1.0),
               ValidationError);
  EXPECT_THROW(combine(external_scores("a", {1}), external_scores("b", {1}), NAN),
               ValidationError);
}

TEST(LambdaBalance, RatioOfMeanMagnitudes) {
  const auto fit = fit_lambda_balance(external_scores("a", {-4, 4, 10}),
                                      external_scores("b", {1, -1, 1}));
  EXPECT_DOUBLE_EQ(fit.lambda, 6.0);
  EXPECT_DOUBLE_EQ(fit.median_lambda, 4.0);
  EXPECT_THROW(fit_lambda_balance(external_scores("a", {1}), external_scores("b", {0})),
               ValidationError);
}

TEST(Registry, KnownCombinations) {
  EXPECT_EQ(combination_registry().size(), 6u);
  const auto e = find_combination("delta-knn-rlog");
  ASSERT_TRUE(e.has_value());
  EXPECT_EQ(e->first, "delta-knn");
  EXPECT_EQ(e->second, "rlog");
  EXPECT_FALSE(find_combination("rlog-delta-knn").has_value());
}

TEST(Sirc, ParametersFromPopulationStd) {
  const std::vector<double> s2{8, 12};
  const auto p = fit_sirc_params(s2);
  EXPECT_DOUBLE_EQ(p.a, 4.0);
  EXPECT_DOUBLE_EQ(p.b, 0.5);
  EXPECT_THROW(fit_sirc_params(std::vector<double>{3, 3}), ValidationError);
}

TEST(Sirc, GateFormula) {
  const SircParams p{4.0, 0.5, 1.0};
  const auto s = sirc(external_scores("msp", {0.5, 1.0}), external_scores("l1", {4.0, 0.0}), p);
  EXPECT_DOUBLE_EQ(s.values[0], -0.5 * 2.0);
  EXPECT_EQ(s.values[1], 0.0);
}

TEST(Sirc, FeatureL1Norm) {
  const auto ds = Dataset::create("x", 1, 3, 2, {1, -2, 0.5f}, {0, 1}, {0});
  EXPECT_DOUBLE_EQ(feature_l1_norm(ds).values[0], 3.5);
}

TEST(ScoreBundle, RoundTripsBitExact) {
  ScoreBundle bundle;
  bundle.append(external_scores("a", {0.1, -0.0, 1e-310, 3.0}));
  bundle.append(external_scores("b", {1, 2, 3, 4}));
  bundle.metadata_json = R"({"k":3})";
  const auto bytes = encode_bundle(bundle);
  const auto back = decode_bundle(bytes, "mem");
  EXPECT_EQ(encode_bundle(back), bytes);
  EXPECT_EQ(back.column("a").values, bundle.column("a").values);
  EXPECT_EQ(back.metadata_json, bundle.metadata_json);
  EXPECT_THROW(back.column("c"), ValidationError);
  EXPECT_THROW(decode_bundle(bytes.substr(0, bytes.size() - 3), "mem"), FormatError);
}

TEST(ScoreBundle, RejectsLengthMismatch) {
  ScoreBundle bundle;
  bundle.append(external_scores("a", {1, 2}));
  EXPECT_THROW(bundle.append(external_scores("b", {1})), ValidationError);
}

TEST(ScoreVector, CsvUsesShortestDecimal) {
  EXPECT_EQ(encode_scores_csv(external_scores("s", {0.1, 2})), "index,score\n0,0.1\n1,2\n");
  EXPECT_THROW(external_scores("s", {NAN}).check_finite(), ValidationError);
}

}  // namespace
}  // namespace selectorlab
