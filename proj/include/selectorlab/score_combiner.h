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

#ifndef SELECTORLAB_SCORE_COMBINER_H_
#define SELECTORLAB_SCORE_COMBINER_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "selectorlab/score_vector.h"

namespace selectorlab {

// t = s1 + lambda * s2, elementwise. The result is named "<s1>-<s2>".
ScoreVector combine(const ScoreVector& s1, const ScoreVector& s2, double lambda);

struct LambdaFit {
  double lambda = 1.0;         // mean|s1| / mean|s2|, the one used
  double median_lambda = 1.0;  // median|s1| / median|s2|, diagnostic only
  double mean_abs_first = 0.0;
  double mean_abs_second = 0.0;
};

// Balances the magnitudes of two scores on a calibration split so neither
// dominates the sum. Throws if s2 is identically zero.
LambdaFit fit_lambda_balance(const ScoreVector& s1, const ScoreVector& s2);

struct CombinationEntry {
  std::string_view name;
  std::string_view first;
  std::string_view second;
};

// Named score pairs: delta-mds-rlog, delta-knn-rlog, delta-mds-msp,
// delta-knn-msp, msp-rlog, delta-mds-delta-knn.
const std::vector<CombinationEntry>& combination_registry();
std::optional<CombinationEntry> find_combination(std::string_view name);

}  // namespace selectorlab

#endif  // SELECTORLAB_SCORE_COMBINER_H_
