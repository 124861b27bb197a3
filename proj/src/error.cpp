//
// Copyright 2026 The sqlcritic Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//


#include "sqlcritic/error.hpp"

namespace sqlcritic {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::kPrecondition: return "PRECONDITION";
    case ErrorCode::kParse: return "PARSE";
    case ErrorCode::kEmptyJudgments: return "EMPTY_JUDGMENTS";
    case ErrorCode::kEmptyGroup: return "EMPTY_GROUP";
    case ErrorCode::kEmptySet: return "EMPTY_SET";
    case ErrorCode::kDegenerateClasses: return "DEGENERATE_CLASSES";
    case ErrorCode::kLabelRequired: return "LABEL_REQUIRED";
    case ErrorCode::kMissingGold: return "MISSING_GOLD";
    case ErrorCode::kDbUnavailable: return "DB_UNAVAILABLE";
    case ErrorCode::kInsufficientClass: return "INSUFFICIENT_CLASS";
    case ErrorCode::kJudgeUnavailable: return "JUDGE_UNAVAILABLE";
    case ErrorCode::kMalformedJudgeOutput: return "MALFORMED_JUDGE_OUTPUT";
    case ErrorCode::kGeneratorUnavailable: return "GENERATOR_UNAVAILABLE";
    case ErrorCode::kPersistentFormatFailure: return "PERSISTENT_FORMAT_FAILURE";
    case ErrorCode::kConfig: return "CONFIG";
  }
  return "UNKNOWN";
}

}  // namespace sqlcritic
