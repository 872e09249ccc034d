// Copyright 2026 The camtrap-eval Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CAMTRAP_ERRORS_HPP_
#define CAMTRAP_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace camtrap {

// Every failure the library reports carries one of these kinds so callers
// (and the CLI exit-code mapping) can react without parsing messages.
enum class ErrorKind {
  kInvalidGeometry,   // degenerate or non-finite bounding box
  kParse,             // malformed input, message contains the line number
  kDuplicateRecord,   // repeated image_id within one stream
  kOutOfBounds,       // box outside the declared image dimensions
  kInfeasibleSplit,   // requested partition cannot be formed
  kEmptyInput,        // operation needs at least one record/sample
  kEmptyEvaluation,   // evaluation subset holds no ground-truth boxes
  kDivisionUndefined, // estimator undefined for the given counts
  kInfeasibleFlip,    // class flipping requested with fewer than two species
  kInvalidArgument,   // parameter outside its documented range
  kUsage,             // command line misuse
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace camtrap

#endif  // CAMTRAP_ERRORS_HPP_
