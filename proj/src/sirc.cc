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

#include "selectorlab/sirc.h"

#include <algorithm>
#include <cmath>

#include "selectorlab/error.h"

namespace selectorlab {

SircParams fit_sirc_params(std::span<const double> s2_calibration,
                           double s1_max) {
  if (s2_calibration.empty()) {
    throw ValidationError("SIRC calibration needs at least one auxiliary score");
  }
  const double n = static_cast<double>(s2_calibration.size());
  double mean = 0.0;
  for (double v : s2_calibration) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : s2_calibration) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / n);
  if (!(sd > 0.0)) {
    throw ValidationError(
        "auxiliary score has zero spread; SIRC gate slope b = 1/std is undefined");
  }
  return {mean - 3.0 * sd, 1.0 / sd, s1_max};
}

ScoreVector sirc(const ScoreVector& s1, const ScoreVector& s2,
                 const SircParams& params) {
  if (!(params.b > 0.0)) throw ValidationError("SIRC requires b > 0");
  if (s1.size() != s2.size()) {
    throw ValidationError("SIRC inputs have different lengths");
  }
  ScoreVector out;
  out.method = ScoreMethod::kSirc;
  out.name = "sirc";
  out.params.first = s1.name;
  out.params.second = s2.name;
  out.values.resize(s1.size());
  for (std::size_t i = 0; i < s1.size(); ++i) {
    const double gap = params.s1_max - s1.values[i];
    if (gap == 0.0) {
      out.values[i] = 0.0;
      continue;
    }
    // exp(709) is the last finite double; clamp far-out-of-distribution S2.
    const double exponent = std::min(-params.b * (s2.values[i] - params.a), 700.0);
    out.values[i] = -gap * (1.0 + std::exp(exponent));
  }
  return out;
}

ScoreVector feature_l1_norm(const Dataset& ds) {
  ScoreVector s;
  s.name = "feature-l1";
  s.values.resize(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    double total = 0.0;
    for (float v : ds.feature_row(i)) total += std::abs(static_cast<double>(v));
    s.values[i] = total;
  }
  return s;
}

}  // namespace selectorlab
