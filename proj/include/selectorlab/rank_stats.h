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

#ifndef SELECTORLAB_RANK_STATS_H_
#define SELECTORLAB_RANK_STATS_H_

#include <span>
#include <vector>

namespace selectorlab {

// 1-based ranks; tied values share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);

// Pearson correlation of average ranks. Throws if either input is constant.
double spearman_rho(std::span<const double> x, std::span<const double> y);

// Kendall tau-b, O(N log N). Throws if either input is constant.
double kendall_tau(std::span<const double> x, std::span<const double> y);

}  // namespace selectorlab

#endif  // SELECTORLAB_RANK_STATS_H_
