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

#include <cstddef>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "sqlcritic/grpo_math.hpp"
#include "sqlcritic/process_judge.hpp"
#include "sqlcritic/reward_engine.hpp"
#include "sqlcritic/sql_exec.hpp"

namespace sqlcritic {

// Trainer hand-off values. The service only reports them.
struct Hyperparameters {
  int batch_size = 32;
  double learning_rate = 1e-6;
  int rollouts = 5;  // G
};

struct ServiceConfig {
  std::filesystem::path db_root = ".";
  JudgeConfig judge;
  StubMode stub_mode = StubMode::kEcho;
  std::size_t max_batch = 256;
  ExecOptions exec;
  CompareOptions compare;
  RewardMode default_mode;
  GrpoConfig grpo;
  Hyperparameters hyper;
  std::string host = "127.0.0.1";
  int port = 8080;

  // Throws Error(kConfig).
  void validate() const;

  // Missing keys keep their defaults; unknown keys are rejected. Throws
  // Error(kConfig).
  static ServiceConfig from_json(const nlohmann::json& j);
  static ServiceConfig load(const std::filesystem::path& file);
  // The API key is never serialized.
  nlohmann::json to_json() const;

  // RUCO_DB_ROOT, RUCO_JUDGE_ENDPOINT, RUCO_JUDGE_KEY, RUCO_MAX_BATCH.
  ServiceConfig with_env_overrides() const;

  // 16 hex digits of FNV-1a over the serialized config.
  std::string fingerprint() const;
};

}  // namespace sqlcritic
