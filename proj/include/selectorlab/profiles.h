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

#ifndef SELECTORLAB_PROFILES_H_
#define SELECTORLAB_PROFILES_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace selectorlab {

// Default lambda and k per score name for one model family.
struct Profile {
  std::string name;
  std::string description;
  std::map<std::string, double> lambda;
  std::map<std::string, std::size_t> k;

  std::optional<double> lambda_for(const std::string& score) const;
  std::optional<std::size_t> k_for(const std::string& score) const;

  friend bool operator==(const Profile&, const Profile&) = default;
};

// vision-clip, vision-supervised, language.
std::vector<std::string> builtin_profile_names();
Profile builtin_profile(const std::string& name);

// A built-in name or a path to a profile JSON file.
Profile load_profile(const std::string& name_or_path);
Profile parse_profile(const std::string& json_text, const std::string& source);
std::string profile_to_json(const Profile& profile);

}  // namespace selectorlab

#endif  // SELECTORLAB_PROFILES_H_
