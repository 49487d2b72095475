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

#ifndef SELECTORLAB_SIRC_H_
#define SELECTORLAB_SIRC_H_

#include <span>

#include "selectorlab/dataset.h"
#include "selectorlab/score_vector.h"

namespace selectorlab {

// Gate parameters for the softmax-information-retaining combination.
struct SircParams {
  double a = 0.0;       // mean(S2) - 3 * std(S2)
  double b = 1.0;       // 1 / std(S2); must be > 0
  double s1_max = 1.0;  // largest attainable primary score (1 for MSP)
};

// a and b from in-distribution auxiliary scores (population std).
SircParams fit_sirc_params(std::span<const double> s2_calibration,
                           double s1_max = 1.0);

// -(S1max - S1) * (1 + exp(-b (S2 - a))), elementwise.
ScoreVector sirc(const ScoreVector& s1, const ScoreVector& s2,
                 const SircParams& params);

// Default auxiliary score: the L1 norm of each feature row.
ScoreVector feature_l1_norm(const Dataset& ds);

}  // namespace selectorlab

#endif  // SELECTORLAB_SIRC_H_
