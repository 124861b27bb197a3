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


#include "fixtures.hpp"

#include <atomic>
#include <chrono>
#include <unistd.h>

#include "sqlcritic/sql_exec.hpp"

namespace sqlcritic::testing {

const std::string_view kBondCritique = R"(<think>
1. Did I correctly specify the column to filter the bond type?
- Yes, the "WHERE bond_type = 'triple'" clause correctly filters for triple bond types.
2. Did I join the necessary tables to retrieve the required information?
- No, the query does not join the "molecule" table, which is necessary to determine if the molecules are carcinogenic or not. The "bond" table has a "molecule_id" column can be used to join with the "molecule" table.
</think>
<result> False </result>
<correctedSQL>
SELECT b.bond_id, m.label
FROM bond b
JOIN molecule m ON b.molecule_id = m.molecule_id
WHERE b.bond_type = 'triple'
</correctedSQL>
)";

const std::string_view kCryokinesisCritique = R"(<think>
1. Did I use the correct tables for the query?
- Yes, the superpower table contains the power_name and id columns, which are relevant to the question about the power ID of cryokinesis.
2. Did I correctly specify the column to select?
- Yes, the id column is the correct column to select as it represents the power ID.
3. Did I correctly filter the data based on the question?
- Yes, the WHERE clause correctly filters the rows where power_name is 'cryokinesis', which is the power mentioned in the question.
4. Did I include any unnecessary columns or calculations?
- No, the query is straightforward and only selects the id column, which is what the question asks for.
5. Have I ensured that my query accurately targets the required data without adding unnecessary complexity?
- Yes, the query is simple and directly answers the question without any unnecessary complexity.
</think>
<result> True </result>
)";

const std::string_view kWorkRateCritique = R"(<think>
1. Did I use the correct table for the query?
- Yes, the player_attributes table contains the overall_rating, attacking_work_rate, and defensive_work_rate columns, which are relevant to the question.
2. Did I correctly filter the players based on their overall rating?
- Yes, the condition overall_rating BETWEEN 60 AND 65 correctly filters players with an overall rating between 60 and 65.
3. Did I correctly interpret the question regarding attacking and defensive work rates?
- The question asks for players who are "going to be in all of your attack moves instead of defensing." This implies that the players should have a high attacking work rate and a low defensive work rate.
- The predicted SQL uses attacking_work_rate != 'defensive' and defensive_work_rate = 'low'. However, the condition attacking_work_rate != 'defensive' is not specific enough. It should be attacking_work_rate = 'high' to ensure the player is focused on attacking.
4. Did I correctly count the players?
- Yes, the COUNT(*) function is correctly used to count the number of players that meet the specified conditions.
5. Have I ensured that my query accurately targets the required data without adding unnecessary complexity?
- The query is straightforward and correctly targets the required data, but the condition for attacking_work_rate needs to be more specific.
</think>
<result> False </result>
<correctedSQL>
SELECT COUNT(*)
FROM player_attributes
WHERE overall_rating BETWEEN 60 AND 65
AND attacking_work_rate = 'high'
AND defensive_work_rate = 'low'
</correctedSQL>
)";

namespace {

constexpr std::string_view kSuperhero = R"(
CREATE TABLE superpower (id INTEGER PRIMARY KEY, power_name TEXT);
INSERT INTO superpower VALUES (1, 'Agility'), (2, 'Accelerated Healing'),
  (3, 'Cryokinesis'), (4, 'Flight'), (5, 'Telepathy');
)";

constexpr std::string_view kDebitCard = R"(
CREATE TABLE gasstations (GasStationID INTEGER PRIMARY KEY, ChainID INTEGER,
  Country TEXT, Segment TEXT);
CREATE TABLE transactions_1k (TransactionID INTEGER PRIMARY KEY, Date TEXT, Time TEXT,
  CustomerID INTEGER, CardID INTEGER, GasStationID INTEGER, ProductID INTEGER,
  Amount INTEGER, Price REAL);
INSERT INTO gasstations VALUES (1, 13, 'CZE', 'Value for money'),
  (2, 6, 'SVK', 'Premium'), (3, 23, 'CZE', 'Other');
INSERT INTO transactions_1k VALUES
  (1, '2012-08-24', '23:10:00', 31543, 486621, 3, 5, 28, 672.64),
  (2, '2012-08-25', '09:41:00', 46707, 550134, 1, 2, 8, 210.4),
  (3, '2012-08-25', '12:02:00', 7654, 684220, 3, 5, 2, 58.2),
  (4, '2012-08-25', '20:55:00', 17373, 536252, 2, 23, 1, 44.5),
  (5, '2012-08-26', '08:13:00', 31543, 486621, 1, 2, 4, 96.0);
)";

constexpr std::string_view kFootball = R"(
CREATE TABLE Player_Attributes (id INTEGER PRIMARY KEY, player_api_id INTEGER,
  overall_rating INTEGER, attacking_work_rate TEXT, defensive_work_rate TEXT);
INSERT INTO Player_Attributes VALUES
  (1, 505942, 61, 'medium', 'low'),
  (2, 155782, 63, 'high', 'low'),
  (3, 162549, 65, 'high', 'low'),
  (4, 30572, 60, 'medium', 'medium'),
  (5, 23780, 70, 'high', 'low'),
  (6, 27316, 58, 'low', 'low'),
  (7, 564793, 64, 'high', 'high'),
  (8, 45140, 62, 'None', 'low');
)";

constexpr std::string_view kToxicology = R"(
CREATE TABLE molecule (molecule_id TEXT PRIMARY KEY, label TEXT);
CREATE TABLE bond (bond_id TEXT PRIMARY KEY, molecule_id TEXT, bond_type TEXT);
INSERT INTO molecule VALUES ('TR000', '+'), ('TR001', '+'), ('TR002', '-'), ('TR003', '-');
INSERT INTO bond VALUES ('TR000_1_2', 'TR000', '-'), ('TR001_2_4', 'TR001', 'triple'),
  ('TR002_1_3', 'TR002', 'triple'), ('TR003_2_5', 'TR003', '='),
  ('TR003_5_6', 'TR003', 'triple');
)";

constexpr std::string_view kShop = R"(
CREATE TABLE items (id INTEGER PRIMARY KEY, name TEXT, category TEXT, price REAL, qty INTEGER);
INSERT INTO items VALUES
  (1, 'hammer', 'tool', 12.5, 10), (2, 'wrench', 'tool', 9.75, 3),
  (3, 'apple', 'food', 0.5, 120), (4, 'bread', 'food', 2.25, 8),
  (5, 'lamp', 'home', 19.0, 2), (6, 'chair', 'home', 45.0, 6),
  (7, 'saw', 'tool', 22.0, 1), (8, 'rug', 'home', 80.0, 4);
)";

}  // namespace

const std::vector<FixtureDb>& fixture_databases() {
  static const std::vector<FixtureDb> dbs = {
      {"superhero", kSuperhero},
      {"debit_card_specializing", kDebitCard},
      {"european_football", kFootball},
      {"toxicology", kToxicology},
      {"shop", kShop},
  };
  return dbs;
}

void build_fixture_dbs(const std::filesystem::path& root) {
  for (const auto& db : fixture_databases()) {
    const auto ref = DatabaseRef::resolve(root, db.db_id);
    std::filesystem::create_directories(ref.path.parent_path());
    materialize_database(ref.path, db.script);
  }
}

ExecCase case_sensitive_value() {
  return {"case_sensitive_value", "superhero",
          "SELECT id FROM superpower WHERE power_name = 'cryokinesis'",
          "SELECT id FROM superpower WHERE power_name = 'Cryokinesis'"};
}

ExecCase missing_order_by() {
  return {"missing_order_by", "debit_card_specializing",
          "SELECT g.country FROM transactions_1k t JOIN gasstations g ON t.gasstationid = "
          "g.gasstationid WHERE t.date = '2012-08-25' LIMIT 1",
          "SELECT T2.Country FROM transactions_1k AS T1 INNER JOIN gasstations AS T2 ON "
          "T1.GasStationID = T2.GasStationID WHERE T1.Date = '2012-08-25' ORDER BY T1.Time DESC "
          "LIMIT 1"};
}

ExecCase distinct_predicates_same_count() {
  return {"distinct_predicates_same_count", "european_football",
          "SELECT COUNT(*) FROM player_attributes WHERE overall_rating BETWEEN 60 AND 65 AND "
          "attacking_work_rate != 'defensive' AND defensive_work_rate = 'low'",
          "SELECT COUNT(id) FROM Player_Attributes WHERE overall_rating BETWEEN 60 AND 65 AND "
          "defensive_work_rate = 'low'"};
}

namespace {

EvalSample make_sample(const std::filesystem::path& root, std::string id, std::string question,
                       std::string db_id, const ExecCase* c, std::string schema) {
  EvalSample s;
  s.sample_id = std::move(id);
  s.question = std::move(question);
  s.schema_text = std::move(schema);
  s.db = DatabaseRef::resolve(root, db_id);
  if (c) {
    s.predicted_sql = c->predicted;
    s.gold_sql = c->gold;
  }
  return s;
}

}  // namespace

EvalSample bond_sample(const std::filesystem::path& root) {
  EvalSample s = make_sample(root, "bond-triple", "List the bond IDs of triple bonds and whether each molecule is carcinogenic.",
                             "toxicology", nullptr,
                             "CREATE TABLE molecule (molecule_id TEXT PRIMARY KEY, label TEXT);\n"
                             "CREATE TABLE bond (bond_id TEXT PRIMARY KEY, molecule_id TEXT, bond_type TEXT);");
  s.predicted_sql = "SELECT bond_id FROM bond WHERE bond_type = 'triple'";
  s.gold_sql =
      "SELECT T1.bond_id, T2.label FROM bond AS T1 INNER JOIN molecule AS T2 ON T1.molecule_id = "
      "T2.molecule_id WHERE T1.bond_type = 'triple'";
  s.label = false;
  s.critique_text = std::string(kBondCritique);
  return s;
}

EvalSample cryokinesis_sample(const std::filesystem::path& root) {
  const ExecCase c = case_sensitive_value();
  EvalSample s = make_sample(root, "power-cryokinesis", "What is the power ID of cryokinesis?",
                             c.db_id, &c,
                             "CREATE TABLE superpower (id INTEGER PRIMARY KEY, power_name TEXT);");
  s.label = false;
  s.critique_text = std::string(kCryokinesisCritique);
  return s;
}

EvalSample work_rate_sample(const std::filesystem::path& root) {
  const ExecCase c = distinct_predicates_same_count();
  EvalSample s = make_sample(
      root, "attack-work-rate",
      "Among the players with an overall rating between 60 to 65, how many players whose going "
      "to be in all of your attack moves instead of defensing?",
      c.db_id, &c,
      "CREATE TABLE Player_Attributes (id INTEGER PRIMARY KEY, player_api_id INTEGER, "
      "overall_rating INTEGER, attacking_work_rate TEXT, defensive_work_rate TEXT);");
  s.label = true;
  s.critique_text = std::string(kWorkRateCritique);
  return s;
}

std::vector<EvalSample> spider_shaped_corpus() {
  constexpr long kTotal = 1644, kPositive = 776;
  const std::pair<Hardness, long> buckets[] = {{Hardness::kEasy, 57},
                                               {Hardness::kMedium, 620},
                                               {Hardness::kHard, 246},
                                               {Hardness::kExtra, 721}};
  std::vector<EvalSample> out;
  long i = 0;
  for (const auto& [h, n] : buckets) {
    for (long k = 0; k < n; ++k, ++i) {
      EvalSample s;
      s.sample_id = "spider-" + std::to_string(i);
      s.question = "q" + std::to_string(i);
      s.schema_text = "CREATE TABLE t (a INTEGER);";
      s.predicted_sql = "SELECT a FROM t";
      s.db = DatabaseRef{"spider", "spider.sqlite"};
      s.hardness = h;
      // Spread positives evenly across the corpus.
      s.label = (i + 1) * kPositive / kTotal != i * kPositive / kTotal;
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::string render_critique(const std::vector<bool>& step_flags, bool verdict,
                            const std::string& corrected_sql) {
  std::string out = "<think>\n";
  for (std::size_t i = 0; i < step_flags.size(); ++i) {
    const std::string n = std::to_string(i + 1);
    out += n + ". Did I handle item " + n + " of the question correctly?\n";
    out += step_flags[i] ? "- No, the query does not handle item " + n + " as the question requires.\n"
                         : "- Yes, item " + n + " is handled as the question requires.\n";
  }
  out += "</think>\n<result> ";
  out += verdict ? "True" : "False";
  out += " </result>\n";
  if (!corrected_sql.empty()) out += "<correctedSQL>\n" + corrected_sql + "\n</correctedSQL>\n";
  return out;
}

const std::vector<ShopQuery>& shop_queries() {
  static const std::vector<ShopQuery> q = {
      {"SELECT count(*) FROM items", 0},
      {"SELECT count(id) FROM items", 0},
      {"SELECT name FROM items WHERE category = 'tool'", 1},
      {"SELECT name FROM items WHERE category IN ('tool')", 1},
      {"SELECT name FROM items ORDER BY price DESC LIMIT 3", 2},
      {"SELECT category, count(*) FROM items GROUP BY category", 3},
      {"SELECT category, count(id) FROM items GROUP BY category", 3},
      {"SELECT max(price) FROM items", 4},
      {"SELECT name FROM items WHERE qty > 5", 5},
      {"SELECT name FROM items WHERE NOT qty <= 5", 5},
      {"SELECT avg(price) FROM items WHERE category = 'home'", 6},
      {"SELECT missing_column FROM items", -1},
  };
  return q;
}

EvalSample random_shop_sample(std::mt19937_64& rng, const std::filesystem::path& root, int index) {
  const auto& queries = shop_queries();
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  std::size_t gold = pick(queries.size());
  while (queries[gold].equivalence_class < 0) gold = pick(queries.size());
  const std::size_t pred = pick(queries.size());

  EvalSample s;
  s.sample_id = "shop-" + std::to_string(index);
  s.question = "Question " + std::to_string(index) + " about the items table";
  s.schema_text = "CREATE TABLE items (id INTEGER PRIMARY KEY, name TEXT, category TEXT, price REAL, qty INTEGER);";
  s.predicted_sql = queries[pred].sql;
  s.gold_sql = queries[gold].sql;
  s.label = queries[pred].equivalence_class == queries[gold].equivalence_class;
  s.db = DatabaseRef::resolve(root, "shop");

  const int n_steps = static_cast<int>(pick(8)) + 1;
  std::vector<bool> flags(n_steps);
  for (auto&& f : flags) f = pick(3) == 0;
  const bool verdict = pick(2) == 0;
  std::string corrected;
  if (!verdict && pick(10) != 0) corrected = queries[pick(queries.size())].sql;
  std::string text = render_critique(flags, verdict, corrected);
  if (pick(12) == 0) text.erase(text.find("</think>"), 8);
  s.critique_text = std::move(text);
  return s;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
  path_ = std::filesystem::temp_directory_path() /
          ("sqlcritic-" + std::to_string(::getpid()) + "-" + std::to_string(stamp) + "-" +
           std::to_string(counter++));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace sqlcritic::testing
