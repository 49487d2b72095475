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

#include "selectorlab/score_pipeline.h"

#include <algorithm>

#include "selectorlab/error.h"
#include "selectorlab/logit_scores.h"

namespace selectorlab {
namespace {

const std::vector<std::string>& base_names() {
  static const std::vector<std::string> names = {
      "msp", "max-logit", "energy", "rlog",      "mds",
      "knn", "sirc",      "delta-mds", "delta-knn"};
  return names;
}

bool uses_delta_knn(const std::string& name) {
  return name.find("delta-knn") != std::string::npos;
}

}  // namespace

std::vector<std::string> known_score_names() {
  std::vector<std::string> names = base_names();
  for (const auto& e : combination_registry()) names.emplace_back(e.name);
  return names;
}

bool is_known_score(const std::string& name) {
  const auto names = known_score_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

ScoringContext::ScoringContext(const Dataset& train, PipelineOptions options,
                               const Dataset* calibration)
    : train_(train), calibration_(calibration), options_(std::move(options)) {
  if (options_.lambda_auto && calibration_ == nullptr) {
    throw ValidationError("lambda 'auto' needs a calibration split (--calibration)");
  }
  if (options_.k && *options_.k < 1) throw ValidationError("k must be >= 1");
}

std::size_t ScoringContext::k_for(const std::string& name) const {
  if (options_.k) return *options_.k;
  if (auto k = options_.profile.k_for(name)) return *k;
  const std::string family = uses_delta_knn(name) ? "delta-knn" : "knn";
  if (auto k = options_.profile.k_for(family)) return *k;
  return family == "knn" ? 50 : 25;
}

double ScoringContext::lambda_for(const std::string& name) {
  if (options_.lambda) return *options_.lambda;
  if (options_.lambda_auto) {
    auto it = lambda_fits_.find(name);
    if (it == lambda_fits_.end()) {
      const auto entry = find_combination(name);
      if (!entry) throw ValidationError("'" + name + "' is not a combination");
      const auto s1 = base_score(std::string(entry->first), *calibration_, name);
      const auto s2 = base_score(std::string(entry->second), *calibration_, name);
      it = lambda_fits_.emplace(name, fit_lambda_balance(s1, s2)).first;
    }
    return it->second.lambda;
  }
  if (auto lambda = options_.profile.lambda_for(name)) return *lambda;
  throw ValidationError("profile '" + options_.profile.name + "' has no lambda for '" +
                        name + "'; pass --lambda <value> or --lambda auto");
}

ScoreVector ScoringContext::base_score(const std::string& name, const Dataset& test,
                                      const std::string& k_key) {
  if (test.num_classes() != train_.num_classes() || test.dim() != train_.dim()) {
    throw ValidationError("test set shape (d=" + std::to_string(test.dim()) +
                          ", K=" + std::to_string(test.num_classes()) +
                          ") differs from the training set");
  }
  if (name == "msp") return msp(test);
  if (name == "max-logit") return max_logit(test);
  if (name == "energy") return energy(test, options_.temperature);
  if (name == "rlog") return rlog(test);
  if (name == "mds") {
    if (!mds_) mds_ = MdsModel::fit(train_, options_.shrinkage);
    return mds_->score(test);
  }
  if (name == "knn") {
    if (!knn_) knn_ = KnnModel::fit(train_, normalize());
    return knn_->score(test, k_for(k_key));
  }
  if (name == "sirc") {
    if (!sirc_) sirc_ = fit_sirc_params(feature_l1_norm(train_).values, 1.0);
    return sirc(msp(test), feature_l1_norm(test), *sirc_);
  }
  if (name == "delta-mds") {
    if (!delta_mds_) {
      DeltaMdsOptions opts;
      opts.shrinkage = options_.shrinkage;
      opts.min_partition_samples = options_.min_partition_samples;
      delta_mds_ = DeltaMdsModel::fit(train_, opts);
    }
    return delta_mds_->score(test);
  }
  if (name == "delta-knn") {
    if (!delta_knn_) delta_knn_ = DeltaKnnModel::fit(train_, normalize());
    return delta_knn_->score(test, k_for(k_key), options_.averaged);
  }
  throw ValidationError("unknown score '" + name + "'");
}

ScoreVector ScoringContext::score(const std::string& name, const Dataset& test) {
  try {
    if (auto entry = find_combination(name)) {
      // The combination's own k entry applies to its KNN parent.
      const auto s1 = base_score(std::string(entry->first), test, name);
      const auto s2 = base_score(std::string(entry->second), test, name);
      auto t = combine(s1, s2, lambda_for(name));
      t.name = name;
      return t;
    }
    return base_score(name, test, name);
  } catch (const InsufficientPartitionError& e) {
    throw InsufficientPartitionError("score '" + name + "': " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError("score '" + name + "': " + e.what());
  }
}

}  // namespace selectorlab
