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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sqlcritic/sql_exec.hpp"
#include "sqlcritic/types.hpp"

namespace sqlcritic {

// Record format: one JSON object per line with the EvalSample fields in
// snake_case. The database is stored as "db_id" and resolved against a root
// directory on load; an explicit "db_path" overrides the resolution.
nlohmann::json sample_to_json(const EvalSample& s);
// Throws Error(kParse) on missing or ill-typed fields and
// Error(kInvalidArgument) when a required text field is empty.
EvalSample sample_from_json(const nlohmann::json& j, const std::filesystem::path& db_root);

std::vector<EvalSample> read_corpus(const std::filesystem::path& file,
                                    const std::filesystem::path& db_root);
void write_corpus(const std::filesystem::path& file, const std::vector<EvalSample>& corpus);
void append_jsonl(const std::filesystem::path& file, const nlohmann::json& record);

enum class LabelOutcome { kPositive, kNegative, kUnusable };
std::string_view to_string(LabelOutcome o);

struct LabelConfig {
  MatchConfig match;
  // Fill hardness from the gold query when the sample has none.
  bool classify_missing_hardness = true;
};

// kUnusable when the gold query fails to execute. Throws Error(kMissingGold)
// and Error(kDbUnavailable).
LabelOutcome label_by_execution(const EvalSample& sample, Database& db,
                                const LabelConfig& cfg = {});
LabelOutcome label_by_execution(const EvalSample& sample, const LabelConfig& cfg = {});

struct LabelingResult {
  std::vector<EvalSample> labeled;      // input order, label set
  std::vector<EvalSample> quarantined;  // gold failed to execute
  std::vector<std::pair<std::string, std::string>> errors;  // sample_id, message
};

// Labels every sample, running up to `workers` samples at once through a
// shared connection pool.
LabelingResult label_corpus(const std::vector<EvalSample>& corpus, const LabelConfig& cfg = {},
                            int workers = 4);

// Down-samples the majority class so that positives make up
// `target_pos_ratio` of the result (within one sample). Relative order is
// preserved. Throws Error(kInvalidArgument) for a ratio outside (0, 1) or an
// unlabeled sample and Error(kInsufficientClass) when a class is missing.
std::vector<EvalSample> balance_sample(const std::vector<EvalSample>& corpus,
                                       double target_pos_ratio, std::uint64_t seed);

struct CorpusStats {
  long total = 0;
  long positive = 0;
  long negative = 0;
  long unlabeled = 0;
  std::map<Hardness, long> hardness;  // every class present, zero if unseen

  // Two-column text table: "Total", "Positive", "Negative", then one row per
  // hardness class, counts with percentages of the total.
  std::string to_text(std::string_view column = "corpus") const;
  nlohmann::json to_json() const;
};

CorpusStats corpus_stats(const std::vector<EvalSample>& corpus);

}  // namespace sqlcritic
