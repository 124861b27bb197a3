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


#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sqlcritic {

enum class FormatViolation {
  kMissingThink,
  kMissingResult,
  kBadVerdictToken,
  kTagOrder,
  kEmptySteps,
  kMissingCorrection,
  kUnparseableStep,
};

std::string_view to_string(FormatViolation v);

struct FormatReport {
  bool valid = false;
  // Sorted, without duplicates.
  std::vector<FormatViolation> violations;

  bool has(FormatViolation v) const;
  bool operator==(const FormatReport&) const = default;
};

// One self-asked rubric item and its inspection conclusion.
struct RubricStep {
  int index = 0;  // 1-based, contiguous
  std::string question;
  std::string answer;
  bool flags_error = false;

  bool operator==(const RubricStep&) const = default;
};

struct CritiqueResponse {
  std::vector<RubricStep> steps;
  std::optional<bool> verdict;  // true = predicted SQL judged correct
  std::optional<std::string> corrected_sql;
  std::string raw;
  FormatReport format;

  // Any step asserts a defect in the predicted SQL.
  bool flags_error() const;
};

// Total: never throws on any input, defects are reported in `format`.
CritiqueResponse parse_critique(std::string_view text);

// R_format: 1 iff the response is well formed.
int check_format(const CritiqueResponse& resp);

// Deterministic keyword/negation classifier used for RubricStep::flags_error.
bool answer_flags_error(std::string_view question, std::string_view answer);

// Renders a response back into the tagged critique format. For a valid
// response, parse_critique(to_tagged_text(r)) reproduces r modulo `raw`.
std::string to_tagged_text(const CritiqueResponse& resp);

}  // namespace sqlcritic
