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

#include "pacl/error.h"

namespace pacl {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBadMagic: return "bad_magic";
    case ErrorCode::kTruncatedFile: return "truncated_file";
    case ErrorCode::kNonFiniteValue: return "non_finite_value";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kParseError: return "parse_error";
    case ErrorCode::kDuplicateId: return "duplicate_id";
    case ErrorCode::kMissingEvaluator: return "missing_evaluator";
    case ErrorCode::kIndexOutOfBounds: return "index_out_of_bounds";
    case ErrorCode::kScoreOutOfRange: return "score_out_of_range";
    case ErrorCode::kDimMismatch: return "dim_mismatch";
    case ErrorCode::kZeroVector: return "zero_vector";
    case ErrorCode::kEmptyDataset: return "empty_dataset";
    case ErrorCode::kTooFewPoints: return "too_few_points";
    case ErrorCode::kDegeneratePoints: return "degenerate_points";
    case ErrorCode::kEmptyPositive: return "empty_positive";
    case ErrorCode::kNonPositiveTemperature: return "non_positive_temperature";
    case ErrorCode::kMissingComponent: return "missing_component";
    case ErrorCode::kBadDims: return "bad_dims";
    case ErrorCode::kDegenerateInit: return "degenerate_init";
    case ErrorCode::kNormalizationError: return "normalization_error";
    case ErrorCode::kEmptyPartition: return "empty_partition";
    case ErrorCode::kSingleClass: return "single_class";
    case ErrorCode::kNoPrompts: return "no_prompts";
    case ErrorCode::kBadConfig: return "bad_config";
    case ErrorCode::kInvalidArgument: return "invalid_argument";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

}  // namespace pacl
