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

#include <fstream>

#include "fixtures.hpp"
#include "sqlcritic/dataset.hpp"
#include "sqlcritic/error.hpp"

namespace sqlcritic {
namespace {

class DatasetTest : public ::testing::Test {
 protected:
  void SetUp() override { testing::build_fixture_dbs(dir_.path()); }
  testing::TempDir dir_;
};

TEST_F(DatasetTest, JsonRoundTrip) {
  EvalSample s = testing::bond_sample(dir_.path());
  s.hardness = Hardness::kMedium;
  const auto back = sample_from_json(sample_to_json(s), dir_.path());
  EXPECT_EQ(back, s);
  const auto file = dir_.path() / "c.jsonl";
  write_corpus(file, {s, testing::cryokinesis_sample(dir_.path())});
  const auto corpus = read_corpus(file, dir_.path());
  ASSERT_EQ(corpus.size(), 2u);
  EXPECT_EQ(corpus[0], s);
}

TEST_F(DatasetTest, RejectsBadRecords) {
  nlohmann::json j = sample_to_json(testing::bond_sample(dir_.path()));
  j["question"] = "";
  EXPECT_THROW(sample_from_json(j, dir_.path()), Error);
  j.erase("question");
  EXPECT_THROW(sample_from_json(j, dir_.path()), Error);
  const auto file = dir_.path() / "bad.jsonl";
  std::ofstream(file) << "{not json\n";
  EXPECT_THROW(read_corpus(file, dir_.path()), Error);
}

TEST_F(DatasetTest, LabelByExecution) {
  EvalSample same = testing::cryokinesis_sample(dir_.path());
  same.predicted_sql = *same.gold_sql;
  EXPECT_EQ(label_by_execution(same), LabelOutcome::kPositive);
  EXPECT_EQ(label_by_execution(testing::cryokinesis_sample(dir_.path())), LabelOutcome::kNegative);
  EvalSample broken = same;
  broken.gold_sql = "SELECT nope FROM superpower";
  EXPECT_EQ(label_by_execution(broken), LabelOutcome::kUnusable);
  EvalSample nogold = same;
  nogold.gold_sql.reset();
  try {
    label_by_execution(nogold);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingGold);
  }
  EvalSample nodb = same;
  nodb.db = DatabaseRef::resolve(dir_.path(), "absent");
  try {
    label_by_execution(nodb);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDbUnavailable);
  }
}

TEST_F(DatasetTest, LabelCorpusQuarantinesAndClassifies) {
  EvalSample a = testing::cryokinesis_sample(dir_.path());
  a.label.reset();
  EvalSample b = testing::work_rate_sample(dir_.path());
  b.label.reset();
  EvalSample c = a;
  c.sample_id = "broken";
  c.gold_sql = "SELECT nope FROM superpower";
  EvalSample d = a;
  d.sample_id = "nogold";
  d.gold_sql.reset();
  const auto r = label_corpus({a, b, c, d});
  ASSERT_EQ(r.labeled.size(), 2u);
  EXPECT_EQ(r.labeled[0].label, false);
  EXPECT_EQ(r.labeled[1].label, true);
  EXPECT_EQ(r.labeled[0].hardness, Hardness::kEasy);
  ASSERT_EQ(r.quarantined.size(), 1u);
  EXPECT_EQ(r.quarantined[0].sample_id, "broken");
  ASSERT_EQ(r.errors.size(), 1u);
  EXPECT_EQ(r.errors[0].first, "nogold");
}

std::vector<EvalSample> two_class(int pos, int neg) {
  std::vector<EvalSample> out;
  for (int i = 0; i < pos + neg; ++i) {
    EvalSample s;
    s.sample_id = std::to_string(i);
    s.label = i % (pos + neg) < pos;
    out.push_back(s);
  }
  return out;
}

TEST(Balance, DownSamplesMajority) {
  const auto corpus = two_class(100, 300);
  const auto out = balance_sample(corpus, 0.5, 7);
  long pos = 0, neg = 0;
  for (const auto& s : out) (*s.label ? pos : neg) += 1;
  EXPECT_EQ(pos, 100);
  EXPECT_EQ(neg, 100);
  EXPECT_EQ(balance_sample(corpus, 0.5, 7), out);
  // Order preserved.
  for (std::size_t i = 1; i < out.size(); ++i) {
    EXPECT_LT(std::stoi(out[i - 1].sample_id), std::stoi(out[i].sample_id));
  }
}

TEST(Balance, AlreadyBalancedAndErrors) {
  const auto corpus = two_class(50, 50);
  EXPECT_EQ(balance_sample(corpus, 0.5, 1), corpus);
  try {
    balance_sample(two_class(10, 0), 0.5, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientClass);
  }
  EXPECT_THROW(balance_sample(corpus, 1.0, 1), Error);
}

TEST(CorpusStats, SpiderShape) {
  const auto st = corpus_stats(testing::spider_shaped_corpus());
  EXPECT_EQ(st.total, 1644);
  EXPECT_EQ(st.positive, 776);
  EXPECT_EQ(st.negative, 868);
  const std::string text = st.to_text("Spider");
  EXPECT_NE(text.find("776 (47.20%)"), std::string::npos);
  EXPECT_NE(text.find("Extra\t721 ("), std::string::npos);
}

TEST(CorpusStats, EmptyAndSmall) {
  const auto empty = corpus_stats({});
  EXPECT_EQ(empty.total, 0);
  EXPECT_NE(empty.to_text().find("0 (0.00%)"), std::string::npos);
  const auto st = corpus_stats(two_class(1, 3));
  const std::string text = st.to_text();
  EXPECT_NE(text.find("1 (25.00%)"), std::string::npos);
  EXPECT_NE(text.find("3 (75.00%)"), std::string::npos);
}

}  // namespace
}  // namespace sqlcritic
