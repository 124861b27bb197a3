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

#include <chrono>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sqlcritic/chat_client.hpp"
#include "sqlcritic/critique_parser.hpp"
#include "sqlcritic/types.hpp"

namespace sqlcritic {

struct JudgeConfig {
  std::string endpoint;
  std::string model_name = "judge";
  double temperature = 0.0;
  int max_parallel = 4;
  int retry_limit = 2;
  std::string api_key;
  std::chrono::milliseconds timeout{60'000};

  // Throws Error(kConfig) when an invariant is violated.
  void validate() const;
  // Applies RUCO_JUDGE_ENDPOINT and RUCO_JUDGE_KEY when set.
  JudgeConfig with_env_overrides() const;
};

struct StepJudgment {
  int step_index = 0;
  bool sound = false;
  bool flags_error = false;
  std::string rationale;
  bool malformed = false;  // judge output could not be read; sound forced false

  bool operator==(const StepJudgment&) const = default;
};

struct StepPrompt {
  const EvalSample* sample = nullptr;
  const RubricStep* step = nullptr;
  std::string system;
  std::string user;
};

extern const std::string_view kJudgeSystemPrompt;

StepPrompt render_step_prompt(const EvalSample& sample, const RubricStep& step);

struct JudgeReply {
  bool sound = false;
  std::optional<bool> flags_error;
  std::string rationale;
};

// Reads "VERDICT: SOUND|UNSOUND" (plus optional FLAGS_ERROR and RATIONALE
// lines), a JSON object with the same keys, or a bare sound/unsound token.
std::optional<JudgeReply> parse_judge_reply(std::string_view text);

// Produces the raw judge text for one step. Implementations must be safe to
// call from several threads and throw TransportError when unreachable.
class Judge {
 public:
  virtual ~Judge() = default;
  virtual std::string judge_step(const StepPrompt& prompt) = 0;
};

// Talks to a chat-completion model; identical prompts are served from cache.
class LiveJudge : public Judge {
 public:
  LiveJudge(ChatClient& client, JudgeConfig cfg);
  std::string judge_step(const StepPrompt& prompt) override;
  std::size_t cache_size() const { return cache_.size(); }

 private:
  ChatClient& client_;
  JudgeConfig cfg_;
  ResponseCache cache_;
};

enum class StubMode {
  kEcho,         // every step sound; flags_error taken from the parser
  kNotFlagged,   // sound := !flags_error
  kAllUnsound,
  kUnavailable,  // every call fails with TransportError
};

std::string_view to_string(StubMode m);
std::optional<StubMode> stub_mode_from_string(std::string_view name);

// Deterministic offline judge. Scripted replies, keyed by 1-based step index,
// override the mode for individual steps.
class StubJudge : public Judge {
 public:
  explicit StubJudge(StubMode mode = StubMode::kEcho,
                     std::map<int, std::string> scripted = {})
      : mode_(mode), scripted_(std::move(scripted)) {}
  std::string judge_step(const StepPrompt& prompt) override;

 private:
  StubMode mode_;
  std::map<int, std::string> scripted_;
};

// One judgment per step, in step order. Throws Error(kPrecondition) for an
// invalid or empty response and Error(kJudgeUnavailable) once a step has
// failed retry_limit + 1 times. Malformed replies yield sound=false.
std::vector<StepJudgment> judge_steps(const EvalSample& sample,
                                      const CritiqueResponse& resp, Judge& judge,
                                      const JudgeConfig& cfg = {});

// R_rubric = 1 - (number of unsound answers) / N. Throws kEmptyJudgments.
double compute_r_rubric(std::span<const StepJudgment> judgments);

}  // namespace sqlcritic
