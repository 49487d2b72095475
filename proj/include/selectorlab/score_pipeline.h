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

#ifndef SELECTORLAB_SCORE_PIPELINE_H_
#define SELECTORLAB_SCORE_PIPELINE_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "selectorlab/dataset.h"
#include "selectorlab/distance_scores.h"
#include "selectorlab/profiles.h"
#include "selectorlab/score_combiner.h"
#include "selectorlab/score_vector.h"
#include "selectorlab/sirc.h"

namespace selectorlab {

struct PipelineOptions {
  Profile profile;
  std::optional<std::size_t> k;  // overrides the profile for every KNN score
  std::optional<double> lambda;  // overrides the profile for every combination
  bool lambda_auto = false;      // balance magnitudes on the calibration split
  double temperature = 1.0;
  std::optional<bool> normalize;  // KNN family only; default normalized
  bool averaged = true;           // averaged log-distance for delta-knn
  double shrinkage = 1e-6;
  std::optional<std::size_t> min_partition_samples;
};

// Base scores followed by the named combinations.
std::vector<std::string> known_score_names();
bool is_known_score(const std::string& name);

// Fits train-only models on first use and reuses them for every test set.
class ScoringContext {
 public:
  // `calibration` must outlive the context and is required for lambda_auto.
  ScoringContext(const Dataset& train, PipelineOptions options,
                 const Dataset* calibration = nullptr);

  // Errors from the underlying modules are rethrown with the score named.
  ScoreVector score(const std::string& name, const Dataset& test);

  std::size_t k_for(const std::string& name) const;
  // Lambda used for a combination; fits and caches it when auto.
  double lambda_for(const std::string& name);
  const std::map<std::string, LambdaFit>& lambda_fits() const { return lambda_fits_; }

  const PipelineOptions& options() const { return options_; }
  const MdsModel* mds_model() const { return mds_ ? &*mds_ : nullptr; }
  const KnnModel* knn_model() const { return knn_ ? &*knn_ : nullptr; }
  const DeltaMdsModel* delta_mds_model() const { return delta_mds_ ? &*delta_mds_ : nullptr; }
  const DeltaKnnModel* delta_knn_model() const { return delta_knn_ ? &*delta_knn_ : nullptr; }

 private:
  // `k_key` selects the profile entry for k.
  ScoreVector base_score(const std::string& name, const Dataset& test,
                         const std::string& k_key);
  bool normalize() const { return options_.normalize.value_or(true); }

  const Dataset& train_;
  const Dataset* calibration_;
  PipelineOptions options_;
  std::optional<MdsModel> mds_;
  std::optional<KnnModel> knn_;
  std::optional<DeltaMdsModel> delta_mds_;
  std::optional<DeltaKnnModel> delta_knn_;
  std::optional<SircParams> sirc_;
  std::map<std::string, LambdaFit> lambda_fits_;
};

}  // namespace selectorlab

#endif  // SELECTORLAB_SCORE_PIPELINE_H_
