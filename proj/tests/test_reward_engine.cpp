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


#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "sqlcritic/error.hpp"
#include "sqlcritic/reward_engine.hpp"

namespace sqlcritic {
namespace {

EvalSample labeled(bool y) {
  EvalSample s;
  s.sample_id = "r";
  s.question = "q";
  s.schema_text = "m";
  s.predicted_sql = "SELECT 1";
  s.label = y;
  return s;
}

std::vector<StepJudgment> judgments(int n, int sound, bool flag_last = false) {
  std::vector<StepJudgment> js(n);
  for (int i = 0; i < n; ++i) {
    js[i].step_index = i + 1;
    js[i].sound = i < sound;
  }
  if (flag_last) js.back().flags_error = true;
  return js;
}

CritiqueResponse critique(int n, bool verdict, bool flag_last = false) {
  std::vector<bool> flags(n, false);
  if (flag_last) flags.back() = true;
  return parse_critique(testing::render_critique(flags, verdict, verdict ? "" : "SELECT 2"));
}

TEST(ROut, Sources) {
  EXPECT_EQ(compute_r_out(true, true, false, OutcomeSource::kResultTag), 1);
  EXPECT_EQ(compute_r_out(true, false, false, OutcomeSource::kResultTag), 0);
  EXPECT_EQ(compute_r_out(true, false, true, OutcomeSource::kRubricFlags), 1);
  EXPECT_EQ(compute_r_out(true, true, true, OutcomeSource::kRubricFlags), 0);
  // I(r_rubric < 1) XOR (SQL incorrect)
  EXPECT_EQ(compute_r_out(true, false, false, OutcomeSource::kLiteralXor, 0.5), 0);
  EXPECT_EQ(compute_r_out(true, true, false, OutcomeSource::kLiteralXor, 0.5), 1);
  EXPECT_EQ(compute_r_out(true, false, false, OutcomeSource::kLiteralXor, 1.0), 1);
  EXPECT_EQ(compute_r_out(true, false, true, OutcomeSource::kLiteralXor), 0);
}

TEST(RCons, Branches) {
  EXPECT_EQ(compute_r_cons(true, 1), 1);
  EXPECT_EQ(compute_r_cons(true, 0), -1);
  EXPECT_EQ(compute_r_cons(false, 1), 0);
  EXPECT_EQ(compute_r_cons(true, std::nullopt), 0);
}

TEST(Gamma, StaticAndDynamic) {
  EXPECT_DOUBLE_EQ(gamma_static(1, 0.8, 0), 1.6);
  EXPECT_DOUBLE_EQ(gamma_static(0, 0.8, -1), -1.0);
  EXPECT_DOUBLE_EQ(gamma_static(1, std::nullopt, 0), 0.0);
  EXPECT_EQ(gamma_dynamic(5), 0);
  EXPECT_EQ(gamma_dynamic(6), 1);
  EXPECT_EQ(gamma_dynamic(1), 0);
  EXPECT_THROW(gamma_dynamic(0), Error);
}

TEST(TotalReward, MaximumConfiguration) {
  const auto b = total_reward(labeled(true), critique(6, true), judgments(6, 6), std::nullopt, RewardMode{});
  EXPECT_EQ(b.r_out, 1);
  EXPECT_DOUBLE_EQ(*b.r_rubric, 1.0);
  EXPECT_DOUBLE_EQ(b.gamma_s, 2.0);
  EXPECT_EQ(b.gamma_d, 1);
  EXPECT_DOUBLE_EQ(*b.total, 6.0);
}

TEST(TotalReward, CorrectRejection) {
  const auto b = total_reward(labeled(false), critique(5, false), judgments(5, 4), std::nullopt, RewardMode{});
  EXPECT_EQ(b.r_out, 1);
  EXPECT_DOUBLE_EQ(*b.r_rubric, 0.8);
  EXPECT_DOUBLE_EQ(b.gamma_s, 1.6);
  EXPECT_EQ(b.gamma_d, 0);
  EXPECT_DOUBLE_EQ(*b.total, 1.0 + 2.0 + 1.6 * 0.8);
}

TEST(TotalReward, ConsistencyPenalty) {
  const auto b = total_reward(labeled(true), critique(5, false, true), judgments(5, 3, true), 0, RewardMode{});
  EXPECT_EQ(b.r_out, 0);
  EXPECT_EQ(b.r_cons, -1);
  EXPECT_DOUBLE_EQ(b.gamma_s, -1.0);
  EXPECT_DOUBLE_EQ(*b.total, 1.0 - 0.6);
}

TEST(TotalReward, MalformedIsZero) {
  const auto b = total_reward(labeled(true), parse_critique("oops"), std::nullopt, std::nullopt, RewardMode{});
  EXPECT_EQ(b.r_format, 0);
  EXPECT_DOUBLE_EQ(*b.total, 0.0);
}

TEST(TotalReward, Variants) {
  RewardMode ex{RewardVariant::kEx, CoefficientMode::kStaticDynamic, OutcomeSource::kRubricFlags};
  const auto e = total_reward(labeled(true), critique(6, true), judgments(6, 6), std::nullopt, ex);
  EXPECT_DOUBLE_EQ(*e.total, 3.0);
  EXPECT_FALSE(e.r_rubric.has_value());
  EXPECT_EQ(e.mode.outcome_source, OutcomeSource::kResultTag);

  RewardMode pr{RewardVariant::kExPr, CoefficientMode::kStatic, OutcomeSource::kResultTag};
  const auto p = total_reward(labeled(true), critique(6, true), judgments(6, 6), std::nullopt, pr);
  EXPECT_EQ(p.gamma_d, 0);
  EXPECT_DOUBLE_EQ(*p.total, 5.0);
  const auto p0 = total_reward(labeled(true), critique(5, false, true), judgments(5, 3, true), 0, pr);
  EXPECT_DOUBLE_EQ(p0.gamma_s, 0.0);
  EXPECT_DOUBLE_EQ(*p0.total, 1.0);
}

TEST(TotalReward, JudgeUnavailableDropsRubric) {
  const auto b = total_reward(labeled(true), critique(6, true), std::nullopt, std::nullopt, RewardMode{});
  EXPECT_FALSE(b.r_rubric.has_value());
  EXPECT_DOUBLE_EQ(b.gamma_s, 0.0);
  EXPECT_DOUBLE_EQ(*b.total, 3.0);
}

TEST(TotalReward, LabelHandling) {
  EvalSample s = labeled(true);
  s.label.reset();
  try {
    total_reward(s, critique(2, true), std::nullopt, std::nullopt, RewardMode{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLabelRequired);
  }
  const auto b = total_reward(s, critique(2, true), judgments(2, 2), std::nullopt, RewardMode{},
                              ScoringOptions{false});
  EXPECT_TRUE(b.inference_only);
  EXPECT_FALSE(b.total.has_value());
  EXPECT_FALSE(b.r_out.has_value());
  EXPECT_DOUBLE_EQ(*b.r_rubric, 1.0);
}

TEST(NeedsVerification, OnlyWhenConsistencyBranchApplies) {
  const auto resp = critique(5, false, true);
  EXPECT_TRUE(needs_verification(labeled(true), resp, judgments(5, 5, true), RewardMode{}));
  EXPECT_FALSE(needs_verification(labeled(false), resp, judgments(5, 5, true), RewardMode{}));
  RewardMode pr{RewardVariant::kExPr, CoefficientMode::kStaticDynamic, OutcomeSource::kResultTag};
  EXPECT_FALSE(needs_verification(labeled(true), resp, judgments(5, 5, true), pr));
}

TEST(ModeNames, RoundTrip) {
  EXPECT_EQ(variant_from_string("EX-PR-VC"), RewardVariant::kExPrVc);
  EXPECT_EQ(coefficients_from_string("static"), CoefficientMode::kStatic);
  EXPECT_EQ(outcome_source_from_string("literal_xor"), OutcomeSource::kLiteralXor);
  EXPECT_FALSE(variant_from_string("bogus"));
}

}  // namespace
}  // namespace sqlcritic
