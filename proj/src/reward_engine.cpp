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


#include "sqlcritic/reward_engine.hpp"

#include <algorithm>
#include <cctype>

#include "sqlcritic/error.hpp"

namespace sqlcritic {
namespace {

bool flagged(const CritiqueResponse& resp,
             const std::optional<std::vector<StepJudgment>>& judgments) {
  if (judgments && !judgments->empty()) {
    return std::any_of(judgments->begin(), judgments->end(),
                       [](const StepJudgment& j) { return j.flags_error; });
  }
  return resp.flags_error();
}

std::optional<double> rubric_score(const RewardMode& mode,
                                   const std::optional<std::vector<StepJudgment>>& judgments) {
  if (mode.variant == RewardVariant::kEx || !judgments || judgments->empty()) {
    return std::nullopt;
  }
  return compute_r_rubric(*judgments);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return c == '-' ? '_' : static_cast<char>(std::tolower(c));
  });
  return out;
}

}  // namespace

RewardMode RewardMode::normalized() const {
  RewardMode m = *this;
  if (m.variant == RewardVariant::kEx) m.outcome_source = OutcomeSource::kResultTag;
  return m;
}

std::string_view to_string(RewardVariant v) {
  switch (v) {
    case RewardVariant::kEx: return "ex";
    case RewardVariant::kExPr: return "ex_pr";
    case RewardVariant::kExPrVc: return "ex_pr_vc";
  }
  return "ex_pr_vc";
}

std::string_view to_string(CoefficientMode c) {
  return c == CoefficientMode::kStatic ? "static" : "static_dynamic";
}

std::string_view to_string(OutcomeSource s) {
  switch (s) {
    case OutcomeSource::kResultTag: return "result_tag";
    case OutcomeSource::kRubricFlags: return "rubric_flags";
    case OutcomeSource::kLiteralXor: return "literal_xor";
  }
  return "result_tag";
}

std::optional<RewardVariant> variant_from_string(std::string_view s) {
  const std::string v = lower(s);
  if (v == "ex") return RewardVariant::kEx;
  if (v == "ex_pr") return RewardVariant::kExPr;
  if (v == "ex_pr_vc") return RewardVariant::kExPrVc;
  return std::nullopt;
}

std::optional<CoefficientMode> coefficients_from_string(std::string_view s) {
  const std::string v = lower(s);
  if (v == "static") return CoefficientMode::kStatic;
  if (v == "static_dynamic") return CoefficientMode::kStaticDynamic;
  return std::nullopt;
}

std::optional<OutcomeSource> outcome_source_from_string(std::string_view s) {
  const std::string v = lower(s);
  if (v == "result_tag") return OutcomeSource::kResultTag;
  if (v == "rubric_flags") return OutcomeSource::kRubricFlags;
  if (v == "literal_xor") return OutcomeSource::kLiteralXor;
  return std::nullopt;
}

int compute_r_out(bool verdict, bool label_y, bool rubric_flags_error, OutcomeSource source,
                  std::optional<double> r_rubric) {
  switch (source) {
    case OutcomeSource::kResultTag:
      return verdict == label_y ? 1 : 0;
    case OutcomeSource::kRubricFlags:
      return (!rubric_flags_error) == label_y ? 1 : 0;
    case OutcomeSource::kLiteralXor: {
      const bool rubric_below_one = r_rubric ? *r_rubric < 1.0 : rubric_flags_error;
      const bool sql_incorrect = !label_y;
      return (rubric_below_one != sql_incorrect) ? 1 : 0;
    }
  }
  return 0;
}

int compute_r_cons(bool rubric_flags_error, std::optional<int> r_verify) {
  if (!rubric_flags_error || !r_verify) return 0;
  return *r_verify == 1 ? 1 : -1;
}

double gamma_static(std::optional<int> r_out, std::optional<double> r_rubric, int r_cons) {
  if (!r_out || !r_rubric) return 0.0;
  if (*r_out == 1) return 2.0 * *r_rubric;
  return static_cast<double>(r_cons);
}

int gamma_dynamic(int n_steps) {
  if (n_steps < 1) throw Error(ErrorCode::kInvalidArgument, "gamma_dynamic needs n_steps >= 1");
  return n_steps > 5 ? 1 : 0;
}

bool needs_verification(const EvalSample& sample, const CritiqueResponse& resp,
                        const std::optional<std::vector<StepJudgment>>& judgments,
                        const RewardMode& raw_mode) {
  const RewardMode mode = raw_mode.normalized();
  if (mode.variant != RewardVariant::kExPrVc || !resp.format.valid || !sample.label ||
      !resp.corrected_sql || !resp.verdict) {
    return false;
  }
  const bool flags = flagged(resp, judgments);
  if (!flags) return false;
  const int r_out = compute_r_out(*resp.verdict, *sample.label, flags, mode.outcome_source,
                                  rubric_score(mode, judgments));
  return r_out == 0;
}

RewardBreakdown total_reward(const EvalSample& sample, const CritiqueResponse& resp,
                             const std::optional<std::vector<StepJudgment>>& judgments,
                             std::optional<int> r_verify, const RewardMode& raw_mode,
                             const ScoringOptions& opts) {
  if (!sample.label && opts.require_label) {
    throw Error(ErrorCode::kLabelRequired,
                "sample '" + sample.sample_id + "' has no ground-truth label");
  }
  RewardBreakdown b;
  b.mode = raw_mode.normalized();
  b.n_steps = static_cast<int>(resp.steps.size());
  b.r_format = check_format(resp);
  b.inference_only = !sample.label.has_value();

  if (b.r_format == 0) {
    if (!b.inference_only) {
      b.r_out = 0;
      b.total = 0.0;
    }
    return b;
  }

  const bool flags = flagged(resp, judgments);
  b.rubric_flags_error = flags;
  b.r_rubric = rubric_score(b.mode, judgments);
  if (b.inference_only) return b;

  const int r_out =
      compute_r_out(*resp.verdict, *sample.label, flags, b.mode.outcome_source, b.r_rubric);
  b.r_out = r_out;

  if (b.mode.variant == RewardVariant::kEx) {
    b.total = b.r_format + 2.0 * r_out;
    return b;
  }

  b.gamma_d = b.mode.coefficients == CoefficientMode::kStaticDynamic ? gamma_dynamic(b.n_steps) : 0;
  if (b.mode.variant == RewardVariant::kExPrVc) {
    b.r_verify = r_verify;
    if (r_out == 0) b.r_cons = compute_r_cons(flags, r_verify);
    b.gamma_s = gamma_static(r_out, b.r_rubric, b.r_cons);
  } else {
    // EX_PR leaves the r_out = 0 branch unscored.
    b.gamma_s = r_out == 1 ? gamma_static(r_out, b.r_rubric, 0) : 0.0;
  }
  b.total = b.r_format + 2.0 * r_out + (b.gamma_s + b.gamma_d) * b.r_rubric.value_or(0.0);
  return b;
}

}  // namespace sqlcritic
