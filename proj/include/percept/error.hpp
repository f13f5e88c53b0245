/*
 * Copyright 2026 The percept-xai Authors.
 *
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

#ifndef PERCEPT_ERROR_HPP_
#define PERCEPT_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace percept {

enum class ErrorKind {
  kInvalidArgument,     // parameter outside its documented domain
  kDimensionMismatch,   // spatial or channel dims disagree
  kOutOfRange,          // index or sample value outside its range
  kAlreadyGrayscale,
  kUnknownEncoder,
  kModelLoad,
  kShapeMismatch,       // encoder input/output shape disagrees with its spec
  kNonFiniteOutput,
  kUninformativeEncoder,
  kEmptyInput,
  kMixedModes,
  kIo,
};

std::string_view ToString(ErrorKind kind);

// All library failures surface as this exception; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace percept

#endif  // PERCEPT_ERROR_HPP_
