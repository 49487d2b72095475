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

#ifndef SELECTORLAB_MANIFEST_H_
#define SELECTORLAB_MANIFEST_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "selectorlab/dataset.h"
#include "selectorlab/synthetic.h"

namespace selectorlab {

struct ManifestDataset {
  std::string name;
  std::string path;  // relative paths resolve against the manifest directory
};

struct ManifestMixSource {
  std::string dataset;                         // dataset or mix name
  std::variant<std::size_t, double> amount = 1.0;  // count or fraction
};

struct ManifestMix {
  std::string name;
  std::vector<ManifestMixSource> sources;
  std::uint64_t seed = 0;
};

struct ManifestSynthetic {
  std::string name;
  SyntheticSpec spec;
};

// {
//   "datasets":  [{"name", "path"}],
//   "mixes":     [{"name", "seed", "sources": [{"dataset", "fraction"|"count"}]}],
//   "synthetic": [{"name", "dim", "n", "seed", "prior_correct", "num_classes",
//                  "correct": density, "wrong": density}]
// }
// density: {"mode": "mixture"|"hard-assign",
//           "components": [{"mean": [...], "covariance": [[...]] | "variance": v,
//                           "weight": w, "label": y}]}
struct Manifest {
  std::filesystem::path base_dir;
  std::vector<ManifestDataset> datasets;
  std::vector<ManifestMix> mixes;
  std::vector<ManifestSynthetic> synthetic;

  bool contains(const std::string& name) const;
  // Loads a dataset, realizes a mix, or generates a synthetic set by name.
  Dataset resolve(const std::string& name) const;
  const ManifestSynthetic& synthetic_spec(const std::string& name) const;
};

Manifest parse_manifest(const std::string& json_text, const std::string& source,
                        std::filesystem::path base_dir);
Manifest load_manifest(const std::string& path);

// `path` loads a dataset file; `manifest.json#name` resolves a manifest entry.
Dataset load_dataset_ref(const std::string& ref);

}  // namespace selectorlab

#endif  // SELECTORLAB_MANIFEST_H_
