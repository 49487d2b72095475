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

#ifndef SELECTORLAB_THEOREMS_H_
#define SELECTORLAB_THEOREMS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace selectorlab {

enum class TheoremId {
  kMspOptimal,       // T1_msp
  kRLogOptimal,      // T1_rlog
  kDeltaMds,         // T2_delta_mds
  kDeltaKnn,         // T3_delta_knn
  kCombination,      // L2_combination
  kAveragedKnn,      // C_averaged_knn
};

std::string_view theorem_name(TheoremId id);
// Throws ValidationError naming the known ids.
TheoremId parse_theorem_id(std::string_view name);
const std::vector<TheoremId>& all_theorems();

struct TheoremConfig {
  std::uint64_t seed = 20240917;
  // Delta-MDS: only run the injected-parameter identity.
  bool true_parameters_only = false;
  std::size_t identity_points = 1000;
  std::size_t estimated_train = 10000;
  std::size_t test_points = 2000;
  double identity_tolerance = 1e-9;
  double estimated_min_rho = 0.99;
  std::vector<std::size_t> knn_sizes = {1000, 10000, 50000};
  double knn_min_rho = 0.95;
  double knn_trend_slack = 0.005;
  std::size_t averaged_k = 64;
  std::size_t averaged_train = 50000;
  double averaged_min_rho = 0.99;
  std::size_t calibrated_points = 2000;
  std::size_t combination_lambdas = 5;
};

struct TheoremResult {
  std::string id;
  bool pass = false;
  std::vector<std::pair<std::string, double>> statistics;  // insertion order
  std::string detail;
};

TheoremResult verify_theorem(TheoremId id, const TheoremConfig& config = {});

// {"all_pass": bool, "results": [{id, pass, statistics{...}, detail}]}
std::string theorem_report_json(std::span<const TheoremResult> results);

}  // namespace selectorlab

#endif  // SELECTORLAB_THEOREMS_H_
