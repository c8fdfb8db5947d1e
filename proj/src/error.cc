// Copyright 2026 The Authors.
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

#include "fairrank/error.h"

namespace fairrank {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidSpec:
      return "InvalidSpec";
    case ErrorCode::kEpsilonBelowMinimum:
      return "EpsilonBelowMinimum";
    case ErrorCode::kInvalidRanking:
      return "InvalidRanking";
    case ErrorCode::kInfeasible:
      return "Infeasible";
    case ErrorCode::kStateSpaceTooLarge:
      return "StateSpaceTooLarge";
    case ErrorCode::kInsufficientProtectedItems:
      return "InsufficientProtectedItems";
    case ErrorCode::kOutOfRangeProportion:
      return "OutOfRangeProportion";
    case ErrorCode::kWindowOutOfRange:
      return "WindowOutOfRange";
    case ErrorCode::kItemMissing:
      return "ItemMissing";
    case ErrorCode::kInstanceTooLarge:
      return "InstanceTooLarge";
    case ErrorCode::kNoFeasibleRanking:
      return "NoFeasibleRanking";
    case ErrorCode::kMissingColumn:
      return "MissingColumn";
    case ErrorCode::kNonNumericScore:
      return "NonNumericScore";
    case ErrorCode::kUnmatchedRow:
      return "UnmatchedRow";
    case ErrorCode::kParseError:
      return "ParseError";
    case ErrorCode::kIoError:
      return "IoError";
    case ErrorCode::kInternalInvariantViolation:
      return "InternalInvariantViolation";
  }
  return "Unknown";
}

}  // namespace fairrank
