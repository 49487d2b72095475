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

#include "selectorlab/manifest.h"

#include <algorithm>
#include <functional>
#include <list>

#include "json.hpp"
#include "selectorlab/binary_io.h"
#include "selectorlab/error.h"

namespace selectorlab {
namespace {

using nlohmann::json;

constexpr int kMaxMixDepth = 16;

Eigen::VectorXd to_vector(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                           static_cast<Eigen::Index>(values.size()));
}

DensityModel parse_density(const json& j, std::size_t dim, const std::string& where) {
  const std::string mode = j.value("mode", "mixture");
  DensityMode density_mode;
  if (mode == "mixture") {
    density_mode = DensityMode::kMixture;
  } else if (mode == "hard-assign") {
    density_mode = DensityMode::kHardAssign;
  } else {
    throw ValidationError(where + ": unknown density mode '" + mode + "'");
  }
  std::vector<GaussianComponent> comps;
  for (const auto& c : j.at("components")) {
    GaussianComponent comp;
    comp.mean = to_vector(c.at("mean"));
    const auto d = static_cast<Eigen::Index>(dim);
    if (comp.mean.size() != d) {
      throw ValidationError(where + ": component mean has dimension " +
                            std::to_string(comp.mean.size()) + ", expected " +
                            std::to_string(dim));
    }
    if (c.contains("covariance")) {
      const auto rows = c.at("covariance").get<std::vector<std::vector<double>>>();
      if (rows.size() != dim) throw ValidationError(where + ": covariance must be dim x dim");
      comp.covariance.resize(d, d);
      for (std::size_t r = 0; r < dim; ++r) {
        if (rows[r].size() != dim) {
          throw ValidationError(where + ": covariance must be dim x dim");
        }
        for (std::size_t col = 0; col < dim; ++col) {
          comp.covariance(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)) =
              rows[r][col];
        }
      }
    } else {
      comp.covariance = c.value("variance", 1.0) * Eigen::MatrixXd::Identity(d, d);
    }
    comp.weight = c.value("weight", 1.0);
    comp.label = c.value("label", std::int64_t{0});
    comps.push_back(std::move(comp));
  }
  try {
    return DensityModel::create(std::move(comps), density_mode);
  } catch (const ValidationError& e) {
    throw ValidationError(where + ": " + e.what());
  }
}

std::filesystem::path resolve_path(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

bool Manifest::contains(const std::string& name) const {
  auto named = [&](const auto& e) { return e.name == name; };
  return std::any_of(datasets.begin(), datasets.end(), named) ||
         std::any_of(mixes.begin(), mixes.end(), named) ||
         std::any_of(synthetic.begin(), synthetic.end(), named);
}

const ManifestSynthetic& Manifest::synthetic_spec(const std::string& name) const {
  for (const auto& s : synthetic) {
    if (s.name == name) return s;
  }
  throw ValidationError("manifest has no synthetic spec named '" + name + "'");
}

Dataset Manifest::resolve(const std::string& name) const {
  std::function<Dataset(const std::string&, int)> go = [&](const std::string& n,
                                                            int depth) -> Dataset {
    if (depth > kMaxMixDepth) {
      throw ValidationError("manifest mixes nest too deeply (cycle at '" + n + "'?)");
    }
    for (const auto& d : datasets) {
      if (d.name == n) {
        return load_dataset(resolve_path(base_dir, d.path).string()).with_name(n);
      }
    }
    for (const auto& s : synthetic) {
      if (s.name == n) return generate(s.spec).dataset.with_name(n);
    }
    for (const auto& m : mixes) {
      if (m.name != n) continue;
      // std::list keeps element addresses stable for the reference wrappers.
      std::list<Dataset> loaded;
      MixSpec spec;
      spec.seed = m.seed;
      spec.name = n;
      for (const auto& src : m.sources) {
        loaded.push_back(go(src.dataset, depth + 1));
        spec.sources.push_back({std::cref(loaded.back()), src.amount});
      }
      return mix_datasets(spec);
    }
    throw ValidationError("manifest has no dataset, mix, or synthetic entry named '" + n +
                          "'");
  };
  return go(name, 0);
}

Manifest parse_manifest(const std::string& json_text, const std::string& source,
                        std::filesystem::path base_dir) {
  Manifest m;
  m.base_dir = std::move(base_dir);
  try {
    const json j = json::parse(json_text);
    for (const auto& d : j.value("datasets", json::array())) {
      m.datasets.push_back({d.at("name").get<std::string>(), d.at("path").get<std::string>()});
    }
    for (const auto& mix : j.value("mixes", json::array())) {
      ManifestMix entry;
      entry.name = mix.at("name").get<std::string>();
      entry.seed = mix.value("seed", std::uint64_t{0});
      for (const auto& s : mix.at("sources")) {
        ManifestMixSource src;
        src.dataset = s.at("dataset").get<std::string>();
        if (s.contains("count") && s.contains("fraction")) {
          throw ValidationError(source + ": mix '" + entry.name +
                                "' source gives both count and fraction");
        }
        if (s.contains("count")) {
          src.amount = s.at("count").get<std::size_t>();
        } else {
          src.amount = s.value("fraction", 1.0);
        }
        entry.sources.push_back(std::move(src));
      }
      m.mixes.push_back(std::move(entry));
    }
    for (const auto& s : j.value("synthetic", json::array())) {
      ManifestSynthetic entry;
      entry.name = s.at("name").get<std::string>();
      const std::string where = source + ": synthetic '" + entry.name + "'";
      auto& spec = entry.spec;
      spec.dim = s.at("dim").get<std::size_t>();
      spec.n = s.value("n", std::size_t{1000});
      spec.seed = s.value("seed", std::uint64_t{0});
      spec.prior_correct = s.value("prior_correct", 0.5);
      spec.num_classes = s.value("num_classes", std::size_t{2});
      if (!(spec.prior_correct > 0.0 && spec.prior_correct <= 1.0)) {
        throw ValidationError(where + ": prior_correct must lie in (0, 1]");
      }
      spec.correct_density = parse_density(s.at("correct"), spec.dim, where);
      spec.wrong_density = parse_density(s.at("wrong"), spec.dim, where);
      m.synthetic.push_back(std::move(entry));
    }
  } catch (const json::exception& e) {
    throw ValidationError(source + ": invalid manifest: " + e.what());
  }
  std::vector<std::string> names;
  for (const auto& d : m.datasets) names.push_back(d.name);
  for (const auto& d : m.mixes) names.push_back(d.name);
  for (const auto& d : m.synthetic) names.push_back(d.name);
  std::sort(names.begin(), names.end());
  if (auto dup = std::adjacent_find(names.begin(), names.end()); dup != names.end()) {
    throw ValidationError(source + ": duplicate manifest name '" + *dup + "'");
  }
  return m;
}

Manifest load_manifest(const std::string& path) {
  const std::string text = read_file(path);
  return parse_manifest(text, path, std::filesystem::path(path).parent_path());
}

Dataset load_dataset_ref(const std::string& ref) {
  const auto hash = ref.rfind('#');
  if (hash == std::string::npos) return load_dataset(ref);
  return load_manifest(ref.substr(0, hash)).resolve(ref.substr(hash + 1));
}

}  // namespace selectorlab
