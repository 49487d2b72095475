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

#ifndef SELECTORLAB_SCORE_VECTOR_H_
#define SELECTORLAB_SCORE_VECTOR_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace selectorlab {

enum class ScoreMethod {
  kMsp,
  kMaxLogit,
  kEnergy,
  kRLog,
  kMds,
  kKnn,
  kSirc,
  kDeltaMds,
  kDeltaKnn,
  kCombination,
  kExternal,  // loaded from disk or supplied by a test
};

std::string_view method_name(ScoreMethod method);

// Hyperparameters that produced a score; unset fields do not apply.
struct ScoreParams {
  std::optional<double> temperature;
  std::optional<std::size_t> k;
  std::optional<double> lambda;
  std::optional<bool> averaged;
  std::optional<bool> normalized;
  std::string first;   // parents of a combination
  std::string second;

  friend bool operator==(const ScoreParams&, const ScoreParams&) = default;
};

// One confidence score per sample. Larger means "more likely correct".
struct ScoreVector {
  std::vector<double> values;
  ScoreMethod method = ScoreMethod::kExternal;
  std::string name;
  ScoreParams params;

  std::size_t size() const { return values.size(); }
  // Throws ValidationError on a non-finite entry.
  void check_finite() const;
};

ScoreVector external_scores(std::string name, std::vector<double> values);

// `index,score` CSV, shortest round-trip decimal formatting.
std::string encode_scores_csv(const ScoreVector& scores);

// Named float64 columns plus a JSON metadata blob.
//   "SCB1" | u32 version=1 | u64 N | u32 columns | u32 meta_len | meta bytes
//   | per column: u32 name_len | name bytes | f64 values[N]
struct ScoreBundle {
  std::size_t n = 0;
  std::vector<ScoreVector> columns;
  std::string metadata_json = "{}";

  void append(ScoreVector column);
  const ScoreVector& column(std::string_view name) const;
};

std::string encode_bundle(const ScoreBundle& bundle);
ScoreBundle decode_bundle(std::string_view bytes, const std::string& source);
ScoreBundle load_bundle(const std::string& path);
void save_bundle(const ScoreBundle& bundle, const std::string& path);

}  // namespace selectorlab

#endif  // SELECTORLAB_SCORE_VECTOR_H_
