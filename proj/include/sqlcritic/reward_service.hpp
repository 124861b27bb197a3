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

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sqlcritic/chat_client.hpp"
#include "sqlcritic/process_judge.hpp"
#include "sqlcritic/reward_engine.hpp"
#include "sqlcritic/service_config.hpp"
#include "sqlcritic/sql_exec.hpp"
#include "sqlcritic/types.hpp"

namespace sqlcritic {

enum class JudgeKind { kLive, kStub };
std::string_view to_string(JudgeKind k);
std::optional<JudgeKind> judge_kind_from_string(std::string_view s);

// A rejected request as a whole (HTTP 400).
class RequestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScoreRequest {
  std::vector<nlohmann::json> samples;  // dataset records carrying critique_text
  RewardMode mode;
  JudgeKind judge = JudgeKind::kStub;
  std::optional<std::string> group_id;
  bool require_label = true;
};

struct SampleResult {
  std::string sample_id;
  std::optional<RewardBreakdown> breakdown;
  std::optional<bool> verdict;
  std::vector<std::string> diagnostics;
  std::optional<std::string> error_code;
  std::string error_message;

  bool ok() const { return !error_code.has_value(); }
};

struct PhaseTiming {
  double parse_ms = 0, judge_ms = 0, verify_ms = 0, reward_ms = 0, total_ms = 0;
};

struct ScoreResponse {
  std::vector<SampleResult> results;  // request order
  std::optional<std::string> group_id;
  std::optional<std::vector<double>> advantages;
  std::optional<std::string> advantages_error;  // why a requested group was not normalized
  PhaseTiming timing;

  long failures() const;
};

nlohmann::json breakdown_to_json(const RewardBreakdown& b);
RewardBreakdown breakdown_from_json(const nlohmann::json& j);
nlohmann::json mode_to_json(const RewardMode& m);

// Throws RequestError for anything other than per-sample problems.
ScoreRequest parse_score_request(const nlohmann::json& body, const ServiceConfig& cfg);
nlohmann::json response_to_json(const ScoreResponse& r, bool include_timing = true);

// Scores critique batches: parse, judge, verify, reward. Safe to share across
// request threads.
class Scorer {
 public:
  // `live_client` backs JudgeKind::kLive; when null one is built from
  // cfg.judge if an endpoint is configured.
  explicit Scorer(ServiceConfig cfg, std::shared_ptr<ChatClient> live_client = nullptr);
  ~Scorer();
  Scorer(const Scorer&) = delete;
  Scorer& operator=(const Scorer&) = delete;

  const ServiceConfig& config() const { return cfg_; }

  // Per-sample failures become error results; the batch never fails.
  ScoreResponse score(const ScoreRequest& req);
  SampleResult score_sample(const EvalSample& sample, const RewardMode& mode, JudgeKind judge,
                            bool require_label, PhaseTiming& timing);

 private:
  ServiceConfig cfg_;
  std::shared_ptr<ChatClient> live_client_;
  std::unique_ptr<LiveJudge> live_judge_;
  ConnectionPool pool_;
};

// /v1/advantages: {"groups": [{"group_id": ..., "rewards": [...]}, ...]} with
// optional "normalize_std" and "std_floor" overrides.
nlohmann::json advantages_endpoint(const nlohmann::json& body, const GrpoConfig& defaults);

}  // namespace sqlcritic
