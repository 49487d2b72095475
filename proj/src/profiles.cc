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

#include "selectorlab/profiles.h"

#include <filesystem>

#include "json.hpp"

#include "selectorlab/binary_io.h"
#include "selectorlab/error.h"

namespace selectorlab {

using nlohmann::json;

std::optional<double> Profile::lambda_for(const std::string& score) const {
  auto it = lambda.find(score);
  if (it == lambda.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Profile::k_for(const std::string& score) const {
  auto it = k.find(score);
  if (it == k.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> builtin_profile_names() {
  return {"vision-clip", "vision-supervised", "language"};
}

Profile builtin_profile(const std::string& name) {
  if (name == "vision-clip") {
    return {"vision-clip",
            "Contrastive vision-language backbone (final-layer image features)",
            {{"delta-mds-rlog", 10000.0}, {"delta-knn-rlog", 10.0}},
            {{"knn", 50}, {"delta-knn", 25}, {"delta-knn-rlog", 25}}};
  }
  if (name == "vision-supervised") {
    return {"vision-supervised",
            "Supervised vision backbone (penultimate-layer features)",
            {{"delta-mds-rlog", 1000.0}, {"delta-knn-rlog", 0.5}},
            {{"knn", 50}, {"delta-knn", 25}, {"delta-knn-rlog", 25}}};
  }
  if (name == "language") {
    return {"language",
            "Fine-tuned text encoder (penultimate-layer features)",
            {{"delta-mds-rlog", 1000.0},
             {"delta-knn-rlog", 0.05},
             {"delta-mds-msp", 1000.0},
             {"delta-knn-msp", 0.5}},
            {{"knn", 50},
             {"delta-knn", 25},
             {"delta-knn-rlog", 25},
             {"delta-knn-msp", 25}}};
  }
  throw ValidationError("unknown profile '" + name + "'");
}

Profile parse_profile(const std::string& json_text, const std::string& source) {
  try {
    const json j = json::parse(json_text);
    Profile p;
    p.name = j.at("name").get<std::string>();
    p.description = j.value("description", "");
    if (j.contains("lambda")) p.lambda = j.at("lambda").get<std::map<std::string, double>>();
    if (j.contains("k")) p.k = j.at("k").get<std::map<std::string, std::size_t>>();
    for (const auto& [score, k] : p.k) {
      if (k < 1) throw ValidationError(source + ": k for " + score + " must be >= 1");
    }
    return p;
  } catch (const json::exception& e) {
    throw ValidationError(source + ": invalid profile: " + e.what());
  }
}

std::string profile_to_json(const Profile& profile) {
  json j;
  j["name"] = profile.name;
  j["description"] = profile.description;
  j["lambda"] = profile.lambda;
  j["k"] = profile.k;
  return j.dump(2) + "\n";
}

Profile load_profile(const std::string& name_or_path) {
  for (const auto& name : builtin_profile_names()) {
    if (name == name_or_path) return builtin_profile(name);
  }
  if (std::filesystem::exists(name_or_path)) {
    return parse_profile(read_file(name_or_path), name_or_path);
  }
  throw ValidationError("unknown profile '" + name_or_path +
                        "' (not a built-in name or an existing file)");
}

}  // namespace selectorlab
