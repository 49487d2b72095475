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

#ifndef SELECTORLAB_LOGIT_SCORES_H_
#define SELECTORLAB_LOGIT_SCORES_H_

#include <span>
#include <vector>

#include "selectorlab/dataset.h"
#include "selectorlab/score_vector.h"

namespace selectorlab {

// Max-shifted softmax in 64-bit.
std::vector<double> softmax(std::span<const double> logits);
std::vector<double> softmax(std::span<const float> logits);

// Per-row kernels. All reductions run in 64-bit.
double msp_row(std::span<const float> logits);
double msp_row(std::span<const double> logits);
double max_logit_row(std::span<const float> logits);
double energy_row(std::span<const float> logits, double temperature);
// Margin between the two largest logits. Throws for fewer than two logits.
double rlog_row(std::span<const float> logits);
double rlog_row(std::span<const double> logits);

ScoreVector msp(const Dataset& ds);
ScoreVector max_logit(const Dataset& ds);
// T * log(sum_k exp(l_k / T)); the negated free energy. T must be > 0.
ScoreVector energy(const Dataset& ds, double temperature = 1.0);
ScoreVector rlog(const Dataset& ds);

// Per-sample L / d2 where d2 is the second-largest softmax probability and L
// the mass below it. Small values mean the top-two concentration that makes
// the margin score a likelihood-ratio proxy holds.
std::vector<double> tail_mass_ratio(const Dataset& ds);

}  // namespace selectorlab

#endif  // SELECTORLAB_LOGIT_SCORES_H_
