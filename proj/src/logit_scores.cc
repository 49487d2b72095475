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

#include "selectorlab/logit_scores.h"

#include <algorithm>
#include <cmath>
#include <functional>

#include "selectorlab/error.h"
#include "selectorlab/parallel.h"

namespace selectorlab {
namespace {

template <typename T>
std::vector<double> softmax_impl(std::span<const T> logits) {
  if (logits.empty()) throw ValidationError("softmax of an empty row");
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double total = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) {
    out[k] = std::exp(static_cast<double>(logits[k]) - m);
    total += out[k];
  }
  for (double& v : out) v /= total;
  return out;
}

template <typename T>
double msp_impl(std::span<const T> logits) {
  // max_k softmax = 1 / sum_k exp(l_k - max).
  const double m = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (T l : logits) total += std::exp(static_cast<double>(l) - m);
  return 1.0 / total;
}

template <typename T>
double rlog_impl(std::span<const T> logits) {
  if (logits.size() < 2) {
    throw ValidationError("logit margin needs at least two classes");
  }
  double first = -INFINITY;
  double second = -INFINITY;
  for (T v : logits) {
    const double l = v;
    if (l > first) {
      second = first;
      first = l;
    } else if (l > second) {
      second = l;
    }
  }
  return first - second;
}

ScoreVector per_row(const Dataset& ds, ScoreMethod method,
                    const std::function<double(std::span<const float>)>& f) {
  ScoreVector s;
  s.method = method;
  s.name = std::string(method_name(method));
  s.values.resize(ds.size());
  parallel_for(ds.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) s.values[i] = f(ds.logit_row(i));
  });
  return s;
}

}  // namespace

std::vector<double> softmax(std::span<const double> logits) {
  return softmax_impl(logits);
}

std::vector<double> softmax(std::span<const float> logits) {
  return softmax_impl(logits);
}

double msp_row(std::span<const float> logits) { return msp_impl(logits); }
double msp_row(std::span<const double> logits) { return msp_impl(logits); }

double rlog_row(std::span<const float> logits) { return rlog_impl(logits); }
double rlog_row(std::span<const double> logits) { return rlog_impl(logits); }

double max_logit_row(std::span<const float> logits) {
  return *std::max_element(logits.begin(), logits.end());
}

double energy_row(std::span<const float> logits, double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw ValidationError("energy temperature must be positive, got " +
                          std::to_string(temperature));
  }
  const double m = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (float l : logits) total += std::exp((static_cast<double>(l) - m) / temperature);
  return m + temperature * std::log(total);
}

ScoreVector msp(const Dataset& ds) {
  return per_row(ds, ScoreMethod::kMsp, msp_impl<float>);
}

ScoreVector max_logit(const Dataset& ds) {
  return per_row(ds, ScoreMethod::kMaxLogit, max_logit_row);
}

ScoreVector energy(const Dataset& ds, double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw ValidationError("energy temperature must be positive, got " +
                          std::to_string(temperature));
  }
  ScoreVector s = per_row(ds, ScoreMethod::kEnergy, [temperature](auto row) {
    return energy_row(row, temperature);
  });
  s.params.temperature = temperature;
  return s;
}

ScoreVector rlog(const Dataset& ds) {
  return per_row(ds, ScoreMethod::kRLog, rlog_impl<float>);
}

std::vector<double> tail_mass_ratio(const Dataset& ds) {
  std::vector<double> out(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    std::vector<double> p = softmax(ds.logit_row(i));
    std::sort(p.begin(), p.end(), std::greater<>());
    double tail = 0.0;
    for (std::size_t k = 2; k < p.size(); ++k) tail += p[k];
    out[i] = p[1] > 0.0 ? tail / p[1] : INFINITY;
  }
  return out;
}

}  // namespace selectorlab
