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
#include <array>

#include <cmath>
#include <numeric>

#include "sqlcritic/error.hpp"
#include "sqlcritic/grpo_math.hpp"
#include "sqlcritic/metrics.hpp"

namespace sqlcritic {
namespace {

TEST(GroupAdvantages, KnownValues) {
  const std::vector<double> r{1, 2, 3, 4};
  const auto a = group_advantages(r);
  const double sd = std::sqrt(1.25);
  EXPECT_DOUBLE_EQ(a[0], -1.5 / sd);
  EXPECT_DOUBLE_EQ(a[3], 1.5 / sd);
  GrpoConfig raw;
  raw.normalize_std = false;
  EXPECT_DOUBLE_EQ(group_advantages(r, raw)[0], -1.5);
}

TEST(GroupAdvantages, ConstantAndEmpty) {
  const std::vector<double> c{3.7, 3.7, 3.7};
  for (double a : group_advantages(c)) EXPECT_EQ(a, 0.0);
  EXPECT_EQ(group_advantages(std::vector<double>{5.0})[0], 0.0);
  EXPECT_THROW(group_advantages(std::vector<double>{}), Error);
}

TEST(ClippedSurrogate, WorkedExamples) {
  EXPECT_DOUBLE_EQ(clipped_surrogate(1.5, 1.0, 0.2), 1.2);
  EXPECT_DOUBLE_EQ(clipped_surrogate(0.5, -1.0, 0.2), -0.8);
  EXPECT_DOUBLE_EQ(clipped_surrogate(1.0, 2.0, 0.2), 2.0);
  EXPECT_THROW(clipped_surrogate(0.0, 1.0, 0.2), Error);
}

TEST(KlTerm, NonNegativeAndZeroAtEquality) {
  EXPECT_EQ(kl_term(-1.3, -1.3), 0.0);
  EXPECT_GT(kl_term(-1.0, -2.0), 0.0);
  EXPECT_GT(kl_term(-2.0, -1.0), 0.0);
}

TEST(GrpoObjective, MatchesManualSum) {
  RolloutGroup g;
  g.rewards = {1, 3};
  g.logp_new = std::vector<double>{-1.0, -2.0};
  g.logp_old = std::vector<double>{-1.0, -2.0};
  g.logp_ref = std::vector<double>{-1.0, -2.0};
  EXPECT_NEAR(grpo_objective(g), 0.0, 1e-15);
  g.logp_new->push_back(0);
  EXPECT_THROW(grpo_objective(g), Error);
  EXPECT_DOUBLE_EQ(token_mean(-10.0, 4), -2.5);
}

TEST(GrpoConfig, Defaults) {
  GrpoConfig c;
  EXPECT_DOUBLE_EQ(c.clip_eps, 0.2);
  EXPECT_DOUBLE_EQ(c.kl_beta, 0.001);
  EXPECT_TRUE(c.normalize_std);
  c.clip_eps = 1.5;
  EXPECT_THROW(c.validate(), Error);
}

std::vector<ScoredPrediction> preds(std::vector<double> scores, std::vector<bool> labels) {
  std::vector<ScoredPrediction> out;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out.push_back({scores[i], scores[i] >= 0.5, labels[i], Hardness::kUnknown});
  }
  return out;
}

TEST(Metrics, AucWorkedExample) {
  const auto p = preds({0.1, 0.4, 0.35, 0.8}, {false, false, true, true});
  EXPECT_DOUBLE_EQ(auc(p), 0.75);
}

TEST(Metrics, AucTiesAndDegenerate) {
  EXPECT_DOUBLE_EQ(auc(preds({0.5, 0.5}, {true, false})), 0.5);
  EXPECT_THROW(auc(preds({0.1, 0.2}, {true, true})), Error);
}

TEST(Metrics, F1AndAccuracy) {
  std::vector<ScoredPrediction> p{{1, true, true}, {1, true, true}, {1, true, false},
                                  {0, false, true}, {0, false, false}};
  EXPECT_DOUBLE_EQ(f1(p).value, 2.0 / 3.0);
  EXPECT_FALSE(f1(p).zero_division);
  EXPECT_DOUBLE_EQ(accuracy(p), 0.6);
  std::vector<ScoredPrediction> none{{0, false, false}, {0, false, false}};
  EXPECT_EQ(f1(none).value, 0.0);
  EXPECT_TRUE(f1(none).zero_division);
  EXPECT_THROW(accuracy({}), Error);
}

TEST(Metrics, PercentFormatting) {
  EXPECT_EQ(format_count_percent(776, 1644), "776 (47.20%)");
  EXPECT_EQ(format_count_percent(1, 4), "1 (25.00%)");
  EXPECT_EQ(format_count_percent(0, 0), "0 (0.00%)");
}

TEST(Metrics, GroupedReport) {
  std::vector<ScoredPrediction> p{{0.9, true, true, Hardness::kEasy},
                                  {0.1, false, false, Hardness::kEasy},
                                  {0.8, true, false, Hardness::kHard}};
  const auto r = grouped_report(p);
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_EQ(r.rows[0].group, "easy");
  EXPECT_EQ(r.rows[1].group, "hard");
  EXPECT_FALSE(r.rows[1].auc.has_value());
  EXPECT_EQ(r.rows[2].group, "overall");
  EXPECT_NE(r.to_tsv().find("overall\t3"), std::string::npos);
  EXPECT_TRUE(grouped_report({}).rows.empty());
  EXPECT_DOUBLE_EQ(score_from_verdicts(std::array<bool, 4>{true, false, true, true}), 0.75);
}

}  // namespace
}  // namespace sqlcritic
