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

#ifndef SELECTORLAB_ATOMIC_FILE_H_
#define SELECTORLAB_ATOMIC_FILE_H_

#include <string>
#include <string_view>

namespace selectorlab {

// Writes to a sibling temporary file, then renames it over `path`.
void write_file_atomic(const std::string& path, std::string_view contents);

}  // namespace selectorlab

#endif  // SELECTORLAB_ATOMIC_FILE_H_
