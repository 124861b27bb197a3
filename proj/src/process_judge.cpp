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


#include "sqlcritic/process_judge.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdlib>
#include <exception>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "sqlcritic/error.hpp"

namespace sqlcritic {
namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<bool> read_sound_token(std::string_view token) {
  std::string t = lowercase(trim(token));
  while (!t.empty() && !std::isalpha(static_cast<unsigned char>(t.back()))) t.pop_back();
  while (!t.empty() && !std::isalpha(static_cast<unsigned char>(t.front()))) t.erase(0, 1);
  if (t == "sound") return true;
  if (t == "unsound") return false;
  return std::nullopt;
}

std::optional<bool> read_yes_no(std::string_view token) {
  const std::string t = lowercase(trim(token));
  if (t == "yes" || t == "true") return true;
  if (t == "no" || t == "false") return false;
  return std::nullopt;
}

// Schema excerpt shown to the judge is capped to keep prompts bounded.
constexpr size_t kSchemaExcerptChars = 4000;

}  // namespace

const std::string_view kJudgeSystemPrompt =
    "You grade one step of a critique of a text-to-SQL prediction. The step is a "
    "self-asked inspection question and the critic's answer. Decide whether the "
    "answer is sound: consistent with the user's question, the database schema and "
    "the predicted SQL. Also state whether the answer claims the predicted SQL has a "
    "defect.\n"
    "Reply with exactly three lines:\n"
    "VERDICT: SOUND or UNSOUND\n"
    "FLAGS_ERROR: YES or NO\n"
    "RATIONALE: one or two sentences";

void JudgeConfig::validate() const {
  if (max_parallel < 1) throw Error(ErrorCode::kConfig, "judge max_parallel must be >= 1");
  if (retry_limit < 0) throw Error(ErrorCode::kConfig, "judge retry_limit must be >= 0");
  if (temperature < 0.0) throw Error(ErrorCode::kConfig, "judge temperature must be >= 0");
}

JudgeConfig JudgeConfig::with_env_overrides() const {
  JudgeConfig out = *this;
  if (const char* v = std::getenv("RUCO_JUDGE_ENDPOINT"); v && *v) out.endpoint = v;
  if (const char* v = std::getenv("RUCO_JUDGE_KEY"); v && *v) out.api_key = v;
  return out;
}

StepPrompt render_step_prompt(const EvalSample& sample, const RubricStep& step) {
  StepPrompt p;
  p.sample = &sample;
  p.step = &step;
  p.system = std::string(kJudgeSystemPrompt);
  std::ostringstream user;
  std::string_view schema = sample.schema_text;
  user << "Question:\n" << sample.question << "\n\n";
  user << "Schema:\n" << schema.substr(0, kSchemaExcerptChars);
  if (schema.size() > kSchemaExcerptChars) user << "\n...";
  user << "\n\nPredicted SQL:\n" << sample.predicted_sql << "\n\n";
  user << "Rubric question " << step.index << ":\n" << step.question << "\n\n";
  user << "Critic's answer:\n" << step.answer << "\n";
  p.user = user.str();
  return p;
}

std::optional<JudgeReply> parse_judge_reply(std::string_view text) {
  const std::string_view body = trim(text);
  if (body.empty()) return std::nullopt;

  if (body.front() == '{') {
    const auto parsed = nlohmann::json::parse(body, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object() || !parsed.contains("verdict") ||
        !parsed["verdict"].is_string()) {
      return std::nullopt;
    }
    auto sound = read_sound_token(parsed["verdict"].get<std::string>());
    if (!sound) return std::nullopt;
    JudgeReply r;
    r.sound = *sound;
    if (parsed.contains("flags_error") && parsed["flags_error"].is_boolean()) {
      r.flags_error = parsed["flags_error"].get<bool>();
    }
    if (parsed.contains("rationale") && parsed["rationale"].is_string()) {
      r.rationale = parsed["rationale"].get<std::string>();
    }
    return r;
  }

  if (auto bare = read_sound_token(body)) return JudgeReply{*bare, std::nullopt, {}};

  std::optional<JudgeReply> reply;
  std::optional<bool> flags;
  std::string rationale;
  std::istringstream lines{std::string(body)};
  for (std::string line; std::getline(lines, line);) {
    const auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    const std::string key = lowercase(trim(std::string_view(line).substr(0, colon)));
    const std::string_view value = trim(std::string_view(line).substr(colon + 1));
    if (key == "verdict" && !reply) {
      if (auto sound = read_sound_token(value)) reply = JudgeReply{*sound, std::nullopt, {}};
    } else if (key == "flags_error" || key == "flags error") {
      flags = read_yes_no(value);
    } else if (key == "rationale") {
      rationale = std::string(value);
    }
  }
  if (!reply) return std::nullopt;
  reply->flags_error = flags;
  reply->rationale = std::move(rationale);
  return reply;
}

LiveJudge::LiveJudge(ChatClient& client, JudgeConfig cfg)
    : client_(client), cfg_(std::move(cfg)) {
  cfg_.validate();
}

std::string LiveJudge::judge_step(const StepPrompt& prompt) {
  ChatRequest req;
  req.model = cfg_.model_name;
  req.temperature = cfg_.temperature;
  req.messages = {{"system", prompt.system}, {"user", prompt.user}};
  const std::string key = chat_request_body(req);
  if (auto hit = cache_.find(key)) return *hit;
  std::string reply = client_.complete(req);
  // Only well-formed replies are cached so a retry can recover.
  if (parse_judge_reply(reply)) cache_.insert(key, reply);
  return reply;
}

std::string_view to_string(StubMode m) {
  switch (m) {
    case StubMode::kEcho: return "echo";
    case StubMode::kNotFlagged: return "not_flagged";
    case StubMode::kAllUnsound: return "all_unsound";
    case StubMode::kUnavailable: return "unavailable";
  }
  return "echo";
}

std::optional<StubMode> stub_mode_from_string(std::string_view name) {
  const std::string n = lowercase(name);
  if (n == "echo") return StubMode::kEcho;
  if (n == "not_flagged") return StubMode::kNotFlagged;
  if (n == "all_unsound") return StubMode::kAllUnsound;
  if (n == "unavailable") return StubMode::kUnavailable;
  return std::nullopt;
}

std::string StubJudge::judge_step(const StepPrompt& prompt) {
  const RubricStep& step = *prompt.step;
  if (auto it = scripted_.find(step.index); it != scripted_.end()) return it->second;
  switch (mode_) {
    case StubMode::kEcho:
      return "VERDICT: SOUND\nRATIONALE: stub judge (echo)";
    case StubMode::kNotFlagged:
      return step.flags_error ? "VERDICT: UNSOUND\nRATIONALE: stub judge (step flags a defect)"
                              : "VERDICT: SOUND\nRATIONALE: stub judge (no defect flagged)";
    case StubMode::kAllUnsound:
      return "VERDICT: UNSOUND\nRATIONALE: stub judge (all unsound)";
    case StubMode::kUnavailable:
      throw TransportError("stub judge configured as unavailable");
  }
  return {};
}

std::vector<StepJudgment> judge_steps(const EvalSample& sample, const CritiqueResponse& resp,
                                      Judge& judge, const JudgeConfig& cfg) {
  if (!resp.format.valid) {
    throw Error(ErrorCode::kPrecondition, "cannot judge a malformed critique");
  }
  if (resp.steps.empty()) {
    throw Error(ErrorCode::kPrecondition, "critique has no rubric steps");
  }
  cfg.validate();

  const size_t n = resp.steps.size();
  std::vector<StepJudgment> out(n);
  std::vector<std::exception_ptr> failures(n);
  std::atomic<size_t> next{0};
  std::atomic<bool> gave_up{false};  // a step exhausted its retries; skip the rest

  auto worker = [&] {
    for (size_t i = next++; i < n && !gave_up; i = next++) {
      const RubricStep& step = resp.steps[i];
      const StepPrompt prompt = render_step_prompt(sample, step);
      std::optional<std::string> raw;
      std::string last_error;
      for (int attempt = 0; attempt <= cfg.retry_limit && !raw; ++attempt) {
        try {
          raw = judge.judge_step(prompt);
        } catch (const TransportError& e) {
          last_error = e.what();
        }
      }
      if (!raw) {
        failures[i] = std::make_exception_ptr(Error(
            ErrorCode::kJudgeUnavailable,
            "judge unavailable for step " + std::to_string(step.index) + ": " + last_error));
        gave_up = true;
        continue;
      }
      StepJudgment& j = out[i];
      j.step_index = step.index;
      j.flags_error = step.flags_error;
      if (auto reply = parse_judge_reply(*raw)) {
        j.sound = reply->sound;
        if (reply->flags_error) j.flags_error = *reply->flags_error;
        j.rationale = std::move(reply->rationale);
      } else {
        j.sound = false;
        j.malformed = true;
        j.rationale = "malformed judge output";
        spdlog::warn("MALFORMED_JUDGE_OUTPUT for sample '{}' step {}", sample.sample_id,
                     step.index);
      }
    }
  };

  const size_t workers = std::min<size_t>(n, static_cast<size_t>(cfg.max_parallel));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return out;
}

double compute_r_rubric(std::span<const StepJudgment> judgments) {
  if (judgments.empty()) {
    throw Error(ErrorCode::kEmptyJudgments, "R_rubric needs at least one judgment");
  }
  const auto incorrect = std::count_if(judgments.begin(), judgments.end(),
                                       [](const StepJudgment& j) { return !j.sound; });
  const double n = static_cast<double>(judgments.size());
  return 1.0 - (1.0 / n) * static_cast<double>(incorrect);
}

}  // namespace sqlcritic
