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

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "sqlcritic/types.hpp"

namespace sqlcritic::testing {

// Tagged critique transcripts.
extern const std::string_view kBondCritique;        // False verdict with correction
extern const std::string_view kCryokinesisCritique;  // True verdict, five steps
extern const std::string_view kWorkRateCritique;     // False verdict, flagged steps

struct FixtureDb {
  std::string db_id;
  std::string_view script;
};

// Mini databases: superhero, debit_card_specializing, european_football,
// toxicology and shop (a generic table for random corpora).
const std::vector<FixtureDb>& fixture_databases();

// Writes every fixture database under root/<db_id>/<db_id>.sqlite.
void build_fixture_dbs(const std::filesystem::path& root);

// Execution case pairs on the fixture databases.
struct ExecCase {
  std::string name;
  std::string db_id;
  std::string predicted;
  std::string gold;
};
ExecCase case_sensitive_value();
ExecCase missing_order_by();
ExecCase distinct_predicates_same_count();

// Samples tied to the transcripts above, labels from execution.
EvalSample bond_sample(const std::filesystem::path& root);
EvalSample cryokinesis_sample(const std::filesystem::path& root);
EvalSample work_rate_sample(const std::filesystem::path& root);

// Count fixture shaped like the Spider test column: 1644 samples, 776
// positive, hardness 57 / 620 / 246 / 721.
std::vector<EvalSample> spider_shaped_corpus();

// Renders a critique with the given step flags. Flagged steps answer "No, the
// query does not ..."; unflagged steps answer "Yes, ...".
std::string render_critique(const std::vector<bool>& step_flags, bool verdict,
                            const std::string& corrected_sql = "");

// Queries against the shop fixture. Each has a known result.
struct ShopQuery {
  std::string sql;
  int equivalence_class;  // queries with equal classes return equal results
};
const std::vector<ShopQuery>& shop_queries();

// Random scoring sample on the shop database with a rendered critique.
EvalSample random_shop_sample(std::mt19937_64& rng, const std::filesystem::path& root,
                              int index);

// Fresh temporary directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace sqlcritic::testing
