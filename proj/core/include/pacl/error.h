/*
 * Copyright 2026 The PACL Authors.
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

#ifndef PACL_ERROR_H_
#define PACL_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace pacl {

enum class ErrorCode {
  kBadMagic,
  kTruncatedFile,
  kNonFiniteValue,
  kIo,
  kParseError,
  kDuplicateId,
  kMissingEvaluator,
  kIndexOutOfBounds,
  kScoreOutOfRange,
  kDimMismatch,
  kZeroVector,
  kEmptyDataset,
  kTooFewPoints,
  kDegeneratePoints,
  kEmptyPositive,
  kNonPositiveTemperature,
  kMissingComponent,
  kBadDims,
  kDegenerateInit,
  kNormalizationError,
  kEmptyPartition,
  kSingleClass,
  kNoPrompts,
  kBadConfig,
  kInvalidArgument,
};

// Stable snake_case name, used in machine-readable CLI errors.
std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pacl

#endif  // PACL_ERROR_H_
