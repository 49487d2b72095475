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

#include "selectorlab/score_combiner.h"

#include <algorithm>
#include <cmath>

#include "selectorlab/error.h"

namespace selectorlab {
namespace {

double median_abs(const std::vector<double>& values) {
  std::vector<double> a(values.size());
  std::transform(values.begin(), values.end(), a.begin(),
                 [](double v) { return std::abs(v); });
  const std::size_t mid = a.size() / 2;
  std::nth_element(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(mid), a.end());
  double m = a[mid];
  if (a.size() % 2 == 0) {
    m = 0.5 * (m + *std::max_element(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(mid)));
  }
  return m;
}

double mean_abs(const std::vector<double>& values) {
  double total = 0.0;
  for (double v : values) total += std::abs(v);
  return total / static_cast<double>(values.size());
}

}  // namespace

ScoreVector combine(const ScoreVector& s1, const ScoreVector& s2, double lambda) {
  if (!std::isfinite(lambda)) throw ValidationError("lambda must be finite");
  if (s1.size() != s2.size()) {
    throw ValidationError("cannot combine '" + s1.name + "' (" +
                          std::to_string(s1.size()) + " values) with '" +
                          s2.name + "' (" + std::to_string(s2.size()) + " values)");
  }
  ScoreVector t;
  t.method = ScoreMethod::kCombination;
  t.name = s1.name + "-" + s2.name;
  t.params.first = s1.name;
  t.params.second = s2.name;
  t.params.lambda = lambda;
  t.params.k = s1.params.k ? s1.params.k : s2.params.k;
  t.values.resize(s1.size());
  for (std::size_t i = 0; i < s1.size(); ++i) {
    t.values[i] = s1.values[i] + lambda * s2.values[i];
  }
  return t;
}

LambdaFit fit_lambda_balance(const ScoreVector& s1, const ScoreVector& s2) {
  if (s1.size() == 0 || s1.size() != s2.size()) {
    throw ValidationError("lambda fitting needs two aligned, non-empty scores");
  }
  LambdaFit fit;
  fit.mean_abs_first = mean_abs(s1.values);
  fit.mean_abs_second = mean_abs(s2.values);
  if (!(fit.mean_abs_second > 0.0)) {
    throw ValidationError("score '" + s2.name +
                          "' is identically zero; lambda is undefined");
  }
  fit.lambda = fit.mean_abs_first / fit.mean_abs_second;
  const double med2 = median_abs(s2.values);
  fit.median_lambda = med2 > 0.0 ? median_abs(s1.values) / med2 : fit.lambda;
  return fit;
}

const std::vector<CombinationEntry>& combination_registry() {
  static const std::vector<CombinationEntry> registry = {
      {"delta-mds-rlog", "delta-mds", "rlog"},
      {"delta-knn-rlog", "delta-knn", "rlog"},
      {"delta-mds-msp", "delta-mds", "msp"},
      {"delta-knn-msp", "delta-knn", "msp"},
      {"msp-rlog", "msp", "rlog"},
      {"delta-mds-delta-knn", "delta-mds", "delta-knn"},
  };
  return registry;
}

std::optional<CombinationEntry> find_combination(std::string_view name) {
  for (const auto& e : combination_registry()) {
    if (e.name == name) return e;
  }
  return std::nullopt;
}

}  // namespace selectorlab
