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

#ifndef SELECTORLAB_ERROR_H_
#define SELECTORLAB_ERROR_H_

#include <stdexcept>
#include <string>

namespace selectorlab {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller-supplied value violates a documented precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A file does not conform to its on-disk format.
class FormatError : public Error {
 public:
  using Error::Error;
};

// A distance score cannot be fitted because a training partition is empty or
// too small. Callers are expected to fall back to a logit-based score.
class InsufficientPartitionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace selectorlab

#endif  // SELECTORLAB_ERROR_H_
