// Copyright 2026 The splitbranch Authors
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

#include "splitbranch/error.hpp"

namespace splitbranch {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kFreeVariableUnsupported: return "FreeVariableUnsupported";
    case ErrorCode::kInconsistentBounds: return "InconsistentBounds";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kInvalidModel: return "InvalidModel";
    case ErrorCode::kUnsupportedSection: return "UnsupportedSection";
    case ErrorCode::kMalformedRecord: return "MalformedRecord";
    case ErrorCode::kDuplicateEntry: return "DuplicateEntry";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kNumericalFailure: return "NumericalFailure";
    case ErrorCode::kNotBasic: return "NotBasic";
    case ErrorCode::kRhsTooIntegral: return "RhsTooIntegral";
    case ErrorCode::kNumericallyUnsafe: return "NumericallyUnsafe";
    case ErrorCode::kZeroNorm: return "ZeroNorm";
    case ErrorCode::kNotFractional: return "NotFractional";
    case ErrorCode::kTooLargeToEnumerate: return "TooLargeToEnumerate";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kAllZeroDiffs: return "AllZeroDiffs";
    case ErrorCode::kIncompleteGrid: return "IncompleteGrid";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace splitbranch
