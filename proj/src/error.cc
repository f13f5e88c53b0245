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

#include "percept/error.hpp"

namespace percept {

std::string_view ToString(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid argument";
    case ErrorKind::kDimensionMismatch: return "dimension mismatch";
    case ErrorKind::kOutOfRange: return "out of range";
    case ErrorKind::kAlreadyGrayscale: return "already grayscale";
    case ErrorKind::kUnknownEncoder: return "unknown encoder";
    case ErrorKind::kModelLoad: return "model load failure";
    case ErrorKind::kShapeMismatch: return "shape mismatch";
    case ErrorKind::kNonFiniteOutput: return "non-finite output";
    case ErrorKind::kUninformativeEncoder: return "uninformative encoder";
    case ErrorKind::kEmptyInput: return "empty input";
    case ErrorKind::kMixedModes: return "mixed modes";
    case ErrorKind::kIo: return "i/o failure";
  }
  return "unknown";
}

}  // namespace percept
