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

#ifndef SELECTORLAB_PARALLEL_H_
#define SELECTORLAB_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace selectorlab {

// Worker count: hardware concurrency, capped by SELECTORLAB_THREADS when set.
std::size_t max_threads();

// Runs body(begin, end) over disjoint contiguous chunks of [0, n). Each index
// is visited exactly once, so per-index work gives the same result regardless
// of thread count.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace selectorlab

#endif  // SELECTORLAB_PARALLEL_H_
