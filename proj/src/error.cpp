// Copyright 2026 The riskcdf Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "riskcdf/error.hpp"

namespace riskcdf {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptySample: return "EmptySample";
    case ErrorCode::kInvalidLoss: return "InvalidLoss";
    case ErrorCode::kInvalidOrder: return "InvalidOrder";
    case ErrorCode::kSupportViolation: return "SupportViolation";
    case ErrorCode::kInvalidDistortion: return "InvalidDistortion";
    case ErrorCode::kInvalidSpectrum: return "InvalidSpectrum";
    case ErrorCode::kInvalidAlpha: return "InvalidAlpha";
    case ErrorCode::kInvalidDelta: return "InvalidDelta";
    case ErrorCode::kInvalidGrowth: return "InvalidGrowth";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kShapeError: return "ShapeError";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kFormatError: return "FormatError";
    case ErrorCode::kDiverged: return "Diverged";
  }
  return "Unknown";
}

ErrorClass ClassOf(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptySample:
    case ErrorCode::kInvalidLoss:
    case ErrorCode::kSupportViolation:
    case ErrorCode::kShapeError:
    case ErrorCode::kFormatError:
      return ErrorClass::kData;
    case ErrorCode::kTooLarge:
    case ErrorCode::kDiverged:
      return ErrorClass::kNumeric;
    default:
      return ErrorClass::kConfig;
  }
}

}  // namespace riskcdf
