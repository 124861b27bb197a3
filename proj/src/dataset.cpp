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


#include "sqlcritic/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "sqlcritic/error.hpp"
#include "sqlcritic/metrics.hpp"
#include "sqlcritic/sql_analysis.hpp"

namespace sqlcritic {
namespace {

using nlohmann::json;

std::string required_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw Error(ErrorCode::kParse, std::string("record field '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw Error(ErrorCode::kParse, std::string("record field '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

constexpr Hardness kHardnessOrder[] = {Hardness::kEasy, Hardness::kMedium, Hardness::kHard,
                                       Hardness::kExtra, Hardness::kUnknown};

}  // namespace

json sample_to_json(const EvalSample& s) {
  json j;
  j["sample_id"] = s.sample_id;
  j["question"] = s.question;
  j["schema_text"] = s.schema_text;
  j["predicted_sql"] = s.predicted_sql;
  j["gold_sql"] = s.gold_sql ? json(*s.gold_sql) : json(nullptr);
  j["label"] = s.label ? json(*s.label) : json(nullptr);
  j["db_id"] = s.db.db_id;
  j["hardness"] = std::string(to_string(s.hardness));
  j["critique_text"] = s.critique_text ? json(*s.critique_text) : json(nullptr);
  return j;
}

EvalSample sample_from_json(const json& j, const std::filesystem::path& db_root) {
  if (!j.is_object()) throw Error(ErrorCode::kParse, "record must be an object");
  EvalSample s;
  s.sample_id = required_string(j, "sample_id");
  s.question = required_string(j, "question");
  s.schema_text = required_string(j, "schema_text");
  s.predicted_sql = required_string(j, "predicted_sql");
  s.gold_sql = optional_string(j, "gold_sql");
  if (auto it = j.find("label"); it != j.end() && !it->is_null()) {
    if (!it->is_boolean()) throw Error(ErrorCode::kParse, "record field 'label' must be a boolean");
    s.label = it->get<bool>();
  }
  const std::string db_id = required_string(j, "db_id");
  if (auto path = optional_string(j, "db_path")) {
    s.db = DatabaseRef{db_id, *path};
  } else {
    s.db = DatabaseRef::resolve(db_root, db_id);
  }
  s.hardness = hardness_from_string(optional_string(j, "hardness").value_or("unknown"));
  s.critique_text = optional_string(j, "critique_text");
  if (s.question.empty() || s.schema_text.empty() || s.predicted_sql.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "sample '" + s.sample_id + "' needs question, schema_text and predicted_sql");
  }
  return s;
}

std::vector<EvalSample> read_corpus(const std::filesystem::path& file,
                                    const std::filesystem::path& db_root) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot open corpus " + file.string());
  std::vector<EvalSample> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::kParse,
                  file.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
    out.push_back(sample_from_json(j, db_root));
  }
  return out;
}

void write_corpus(const std::filesystem::path& file, const std::vector<EvalSample>& corpus) {
  std::ofstream out(file, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write " + file.string());
  for (const auto& s : corpus) out << sample_to_json(s).dump() << '\n';
}

void append_jsonl(const std::filesystem::path& file, const json& record) {
  std::ofstream out(file, std::ios::app);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot append to " + file.string());
  out << record.dump() << '\n';
}

std::string_view to_string(LabelOutcome o) {
  switch (o) {
    case LabelOutcome::kPositive: return "positive";
    case LabelOutcome::kNegative: return "negative";
    case LabelOutcome::kUnusable: return "unusable";
  }
  return "unusable";
}

LabelOutcome label_by_execution(const EvalSample& sample, Database& db, const LabelConfig& cfg) {
  if (!sample.gold_sql) {
    throw Error(ErrorCode::kMissingGold, "sample '" + sample.sample_id + "' has no gold SQL");
  }
  switch (exec_match(sample.predicted_sql, *sample.gold_sql, db, cfg.match)) {
    case MatchOutcome::kEquiv: return LabelOutcome::kPositive;
    case MatchOutcome::kRefError: return LabelOutcome::kUnusable;
    default: return LabelOutcome::kNegative;
  }
}

LabelOutcome label_by_execution(const EvalSample& sample, const LabelConfig& cfg) {
  if (!sample.gold_sql) {
    throw Error(ErrorCode::kMissingGold, "sample '" + sample.sample_id + "' has no gold SQL");
  }
  Database db(sample.db);
  return label_by_execution(sample, db, cfg);
}

LabelingResult label_corpus(const std::vector<EvalSample>& corpus, const LabelConfig& cfg,
                            int workers) {
  struct Slot {
    std::optional<LabelOutcome> outcome;
    std::string error;
  };
  std::vector<Slot> slots(corpus.size());
  ConnectionPool pool;
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < corpus.size(); i = next++) {
      try {
        if (!corpus[i].gold_sql) {
          throw Error(ErrorCode::kMissingGold,
                      "sample '" + corpus[i].sample_id + "' has no gold SQL");
        }
        auto lease = pool.acquire(corpus[i].db);
        slots[i].outcome = label_by_execution(corpus[i], *lease, cfg);
      } catch (const std::exception& e) {
        slots[i].error = e.what();
      }
    }
  };
  {
    std::vector<std::jthread> threads;
    const int n = std::clamp(workers, 1, 64);
    for (int t = 0; t < n; ++t) threads.emplace_back(work);
  }

  LabelingResult result;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    EvalSample s = corpus[i];
    if (!slots[i].outcome) {
      result.errors.emplace_back(s.sample_id, slots[i].error);
      continue;
    }
    if (cfg.classify_missing_hardness && s.hardness == Hardness::kUnknown) {
      try {
        s.hardness = classify_hardness(*s.gold_sql);
      } catch (const Error&) {
        // unparseable gold keeps the unknown class
      }
    }
    if (*slots[i].outcome == LabelOutcome::kUnusable) {
      result.quarantined.push_back(std::move(s));
    } else {
      s.label = *slots[i].outcome == LabelOutcome::kPositive;
      result.labeled.push_back(std::move(s));
    }
  }
  return result;
}

std::vector<EvalSample> balance_sample(const std::vector<EvalSample>& corpus,
                                       double target_pos_ratio, std::uint64_t seed) {
  if (!(target_pos_ratio > 0.0 && target_pos_ratio < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "target ratio must lie in (0, 1)");
  }
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!corpus[i].label) {
      throw Error(ErrorCode::kInvalidArgument,
                  "sample '" + corpus[i].sample_id + "' is unlabeled");
    }
    (*corpus[i].label ? pos : neg).push_back(i);
  }
  if (pos.empty() || neg.empty()) {
    throw Error(ErrorCode::kInsufficientClass, "balancing needs both classes");
  }
  const double p = static_cast<double>(pos.size());
  const double n = static_cast<double>(neg.size());
  std::vector<std::size_t>* majority = nullptr;
  std::size_t keep = 0;
  if (p / (p + n) > target_pos_ratio) {
    majority = &pos;
    keep = static_cast<std::size_t>(std::llround(target_pos_ratio * n / (1.0 - target_pos_ratio)));
  } else {
    majority = &neg;
    keep = static_cast<std::size_t>(std::llround(p * (1.0 - target_pos_ratio) / target_pos_ratio));
  }
  keep = std::clamp<std::size_t>(keep, 1, majority->size());

  std::vector<bool> selected(corpus.size(), true);
  if (keep < majority->size()) {
    std::vector<std::size_t> shuffled = *majority;
    std::mt19937_64 rng(seed);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (std::size_t k = keep; k < shuffled.size(); ++k) selected[shuffled[k]] = false;
  }
  std::vector<EvalSample> out;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (selected[i]) out.push_back(corpus[i]);
  }
  return out;
}

CorpusStats corpus_stats(const std::vector<EvalSample>& corpus) {
  CorpusStats st;
  for (Hardness h : kHardnessOrder) st.hardness[h] = 0;
  for (const auto& s : corpus) {
    ++st.total;
    if (!s.label) ++st.unlabeled;
    else if (*s.label) ++st.positive;
    else ++st.negative;
    ++st.hardness[s.hardness];
  }
  return st;
}

std::string CorpusStats::to_text(std::string_view column) const {
  std::ostringstream out;
  auto row = [&](std::string_view name, const std::string& value) {
    out << name << '\t' << value << '\n';
  };
  out << "statistic\t" << column << '\n';
  row("Total", std::to_string(total));
  row("Positive", format_count_percent(positive, total));
  row("Negative", format_count_percent(negative, total));
  if (unlabeled > 0) row("Unlabeled", format_count_percent(unlabeled, total));
  for (Hardness h : kHardnessOrder) {
    const long c = hardness.count(h) ? hardness.at(h) : 0;
    if (h == Hardness::kUnknown && c == 0) continue;
    std::string name(to_string(h));
    name[0] = static_cast<char>(name[0] - 'a' + 'A');
    row(name, format_count_percent(c, total));
  }
  return out.str();
}

nlohmann::json CorpusStats::to_json() const {
  json j;
  j["total"] = total;
  auto entry = [&](long c) {
    return json{{"count", c}, {"percent", format_count_percent(c, total)}};
  };
  j["positive"] = entry(positive);
  j["negative"] = entry(negative);
  j["unlabeled"] = entry(unlabeled);
  j["hardness"] = json::object();
  for (Hardness h : kHardnessOrder) {
    j["hardness"][std::string(to_string(h))] = entry(hardness.count(h) ? hardness.at(h) : 0);
  }
  return j;
}

}  // namespace sqlcritic
