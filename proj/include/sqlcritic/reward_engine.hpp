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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sqlcritic/critique_parser.hpp"
#include "sqlcritic/process_judge.hpp"
#include "sqlcritic/types.hpp"

namespace sqlcritic {

// EX: format + outcome only. EX_PR adds the rubric process reward. EX_PR_VC
// additionally credits or penalizes flagged defects by verifying the
// corrected SQL.
enum class RewardVariant { kEx, kExPr, kExPrVc };
enum class CoefficientMode { kStatic, kStaticDynamic };
enum class OutcomeSource { kResultTag, kRubricFlags, kLiteralXor };

struct RewardMode {
  RewardVariant variant = RewardVariant::kExPrVc;
  CoefficientMode coefficients = CoefficientMode::kStaticDynamic;
  OutcomeSource outcome_source = OutcomeSource::kResultTag;

  // EX always scores the outcome from the result tag.
  RewardMode normalized() const;
  bool operator==(const RewardMode&) const = default;
};

std::string_view to_string(RewardVariant v);
std::string_view to_string(CoefficientMode c);
std::string_view to_string(OutcomeSource s);
std::optional<RewardVariant> variant_from_string(std::string_view s);
std::optional<CoefficientMode> coefficients_from_string(std::string_view s);
std::optional<OutcomeSource> outcome_source_from_string(std::string_view s);

struct RewardBreakdown {
  int r_format = 0;
  std::optional<int> r_out;       // absent for inference-only scoring
  std::optional<double> r_rubric;  // absent for EX or when the judge is unavailable
  int r_cons = 0;
  std::optional<int> r_verify;
  double gamma_s = 0.0;
  int gamma_d = 0;
  std::optional<double> total;    // absent for inference-only scoring
  RewardMode mode;
  int n_steps = 0;
  bool rubric_flags_error = false;
  bool inference_only = false;

  bool operator==(const RewardBreakdown&) const = default;
};

// label_y true means the predicted SQL is truly correct. r_rubric is only read
// by LITERAL_XOR, which evaluates I(R_rubric < 1) XOR y with y = 1 meaning the
// SQL is incorrect; without r_rubric it falls back to rubric_flags_error.
int compute_r_out(bool verdict, bool label_y, bool rubric_flags_error, OutcomeSource source,
                  std::optional<double> r_rubric = std::nullopt);

int compute_r_cons(bool rubric_flags_error, std::optional<int> r_verify);

// 2 * r_rubric when r_out = 1, r_cons when r_out = 0, and 0 when either input
// is unavailable.
double gamma_static(std::optional<int> r_out, std::optional<double> r_rubric, int r_cons);

// 1 iff the critique has more than five steps. Throws kInvalidArgument for n < 1.
int gamma_dynamic(int n_steps);

struct ScoringOptions {
  // Training-time scoring requires a label; otherwise an inference-only
  // breakdown without r_out and total is returned.
  bool require_label = true;
};

// judgments: absent when the judge was not consulted or was unavailable.
// r_verify: the verification result for the corrected SQL, when computed.
RewardBreakdown total_reward(const EvalSample& sample, const CritiqueResponse& resp,
                             const std::optional<std::vector<StepJudgment>>& judgments,
                             std::optional<int> r_verify, const RewardMode& mode,
                             const ScoringOptions& opts = {});

// Whether total_reward would read r_verify for these inputs, so callers can
// skip database work when it would be ignored.
bool needs_verification(const EvalSample& sample, const CritiqueResponse& resp,
                        const std::optional<std::vector<StepJudgment>>& judgments,
                        const RewardMode& mode);

}  // namespace sqlcritic
