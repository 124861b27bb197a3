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


#include "sqlcritic/reward_service.hpp"

#include <chrono>

#include "sqlcritic/critique_parser.hpp"
#include "sqlcritic/dataset.hpp"
#include "sqlcritic/error.hpp"
#include "sqlcritic/grpo_math.hpp"
#include "sqlcritic/process_judge.hpp"

namespace sqlcritic {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

template <typename T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

RewardMode parse_mode(const json& j, const RewardMode& defaults) {
  RewardMode m = defaults;
  auto pick = [](const json& v, const char* what, auto parse) {
    if (!v.is_string()) throw RequestError(std::string(what) + " must be a string");
    auto r = parse(v.template get<std::string>());
    if (!r) throw RequestError("unknown " + std::string(what) + " '" + v.template get<std::string>() + "'");
    return *r;
  };
  if (j.is_string()) {
    m.variant = pick(j, "reward variant", variant_from_string);
    return m;
  }
  if (!j.is_object()) throw RequestError("mode must be a string or an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "variant") m.variant = pick(value, "reward variant", variant_from_string);
    else if (key == "coefficients") m.coefficients = pick(value, "coefficient mode", coefficients_from_string);
    else if (key == "outcome_source") m.outcome_source = pick(value, "outcome source", outcome_source_from_string);
    else throw RequestError("unknown mode key '" + key + "'");
  }
  return m;
}

}  // namespace

std::string_view to_string(JudgeKind k) { return k == JudgeKind::kLive ? "live" : "stub"; }

std::optional<JudgeKind> judge_kind_from_string(std::string_view s) {
  if (s == "live" || s == "LIVE") return JudgeKind::kLive;
  if (s == "stub" || s == "STUB") return JudgeKind::kStub;
  return std::nullopt;
}

long ScoreResponse::failures() const {
  long n = 0;
  for (const auto& r : results) n += r.ok() ? 0 : 1;
  return n;
}

json mode_to_json(const RewardMode& m) {
  return json{{"variant", std::string(to_string(m.variant))},
              {"coefficients", std::string(to_string(m.coefficients))},
              {"outcome_source", std::string(to_string(m.outcome_source))}};
}

json breakdown_to_json(const RewardBreakdown& b) {
  return json{{"r_format", b.r_format},
              {"r_out", opt(b.r_out)},
              {"r_rubric", opt(b.r_rubric)},
              {"r_cons", b.r_cons},
              {"r_verify", opt(b.r_verify)},
              {"gamma_s", b.gamma_s},
              {"gamma_d", b.gamma_d},
              {"total", opt(b.total)},
              {"mode", mode_to_json(b.mode)},
              {"n_steps", b.n_steps},
              {"rubric_flags_error", b.rubric_flags_error},
              {"inference_only", b.inference_only}};
}

RewardBreakdown breakdown_from_json(const json& j) {
  RewardBreakdown b;
  b.r_format = j.at("r_format").get<int>();
  if (!j.at("r_out").is_null()) b.r_out = j.at("r_out").get<int>();
  if (!j.at("r_rubric").is_null()) b.r_rubric = j.at("r_rubric").get<double>();
  b.r_cons = j.at("r_cons").get<int>();
  if (!j.at("r_verify").is_null()) b.r_verify = j.at("r_verify").get<int>();
  b.gamma_s = j.at("gamma_s").get<double>();
  b.gamma_d = j.at("gamma_d").get<int>();
  if (!j.at("total").is_null()) b.total = j.at("total").get<double>();
  b.mode = parse_mode(j.at("mode"), RewardMode{});
  b.n_steps = j.at("n_steps").get<int>();
  b.rubric_flags_error = j.at("rubric_flags_error").get<bool>();
  b.inference_only = j.at("inference_only").get<bool>();
  return b;
}

ScoreRequest parse_score_request(const json& body, const ServiceConfig& cfg) {
  if (!body.is_object()) throw RequestError("request body must be a JSON object");
  ScoreRequest req;
  req.mode = cfg.default_mode;
  for (const auto& [key, value] : body.items()) {
    if (key == "samples") {
      if (!value.is_array()) throw RequestError("'samples' must be an array");
      req.samples.assign(value.begin(), value.end());
    } else if (key == "mode") {
      req.mode = parse_mode(value, cfg.default_mode);
    } else if (key == "judge") {
      auto k = value.is_string() ? judge_kind_from_string(value.get<std::string>()) : std::nullopt;
      if (!k) throw RequestError("'judge' must be \"live\" or \"stub\"");
      req.judge = *k;
    } else if (key == "group_id") {
      if (!value.is_null() && !value.is_string()) throw RequestError("'group_id' must be a string");
      if (value.is_string()) req.group_id = value.get<std::string>();
    } else if (key == "require_label") {
      if (!value.is_boolean()) throw RequestError("'require_label' must be a boolean");
      req.require_label = value.get<bool>();
    } else {
      throw RequestError("unknown request key '" + key + "'");
    }
  }
  if (req.samples.empty()) throw RequestError("batch must contain at least one sample");
  if (req.samples.size() > cfg.max_batch) {
    throw RequestError("batch of " + std::to_string(req.samples.size()) +
                       " exceeds the limit of " + std::to_string(cfg.max_batch));
  }
  return req;
}

json response_to_json(const ScoreResponse& r, bool include_timing) {
  json results = json::array();
  for (const auto& s : r.results) {
    json item{{"sample_id", s.sample_id},
              {"ok", s.ok()},
              {"breakdown", s.breakdown ? breakdown_to_json(*s.breakdown) : json(nullptr)},
              {"verdict", opt(s.verdict)},
              {"diagnostics", s.diagnostics},
              {"error", nullptr}};
    if (s.error_code) item["error"] = json{{"code", *s.error_code}, {"message", s.error_message}};
    results.push_back(std::move(item));
  }
  json out{{"results", std::move(results)},
           {"group_id", opt(r.group_id)},
           {"advantages", opt(r.advantages)},
           {"advantages_error", opt(r.advantages_error)}};
  if (include_timing) {
    out["timing"] = json{{"parse_ms", r.timing.parse_ms},   {"judge_ms", r.timing.judge_ms},
                         {"verify_ms", r.timing.verify_ms}, {"reward_ms", r.timing.reward_ms},
                         {"total_ms", r.timing.total_ms}};
  }
  return out;
}

Scorer::Scorer(ServiceConfig cfg, std::shared_ptr<ChatClient> live_client)
    : cfg_(std::move(cfg)), live_client_(std::move(live_client)) {
  cfg_.validate();
  if (!live_client_ && !cfg_.judge.endpoint.empty()) {
    live_client_ = std::make_shared<HttpChatClient>(cfg_.judge.endpoint, cfg_.judge.api_key,
                                                    cfg_.judge.timeout);
  }
  if (live_client_) live_judge_ = std::make_unique<LiveJudge>(*live_client_, cfg_.judge);
}

Scorer::~Scorer() = default;

SampleResult Scorer::score_sample(const EvalSample& sample, const RewardMode& mode,
                                  JudgeKind judge_kind, bool require_label, PhaseTiming& timing) {
  SampleResult out;
  out.sample_id = sample.sample_id;
  try {
    if (!sample.critique_text) {
      throw Error(ErrorCode::kInvalidArgument, "sample has no critique_text");
    }
    if (!sample.label && require_label) {
      throw Error(ErrorCode::kLabelRequired, "sample has no ground-truth label");
    }
    auto t0 = Clock::now();
    const CritiqueResponse resp = parse_critique(*sample.critique_text);
    timing.parse_ms += ms_since(t0);
    out.verdict = resp.verdict;
    for (auto v : resp.format.violations) out.diagnostics.push_back("FORMAT:" + std::string(to_string(v)));

    std::optional<std::vector<StepJudgment>> judgments;
    if (mode.variant != RewardVariant::kEx && resp.format.valid && !resp.steps.empty()) {
      t0 = Clock::now();
      try {
        if (judge_kind == JudgeKind::kStub) {
          StubJudge stub(cfg_.stub_mode);
          judgments = judge_steps(sample, resp, stub, cfg_.judge);
        } else if (live_judge_) {
          judgments = judge_steps(sample, resp, *live_judge_, cfg_.judge);
        } else {
          out.diagnostics.push_back("JUDGE_UNAVAILABLE: no judge endpoint configured");
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kJudgeUnavailable) throw;
        out.diagnostics.push_back(std::string("JUDGE_UNAVAILABLE: ") + e.what());
      }
      if (judgments) {
        for (const auto& j : *judgments) {
          if (j.malformed) {
            out.diagnostics.push_back("MALFORMED_JUDGE_OUTPUT: step " + std::to_string(j.step_index));
          }
        }
      }
      timing.judge_ms += ms_since(t0);
    }

    std::optional<int> r_verify;
    if (needs_verification(sample, resp, judgments, mode)) {
      t0 = Clock::now();
      try {
        auto lease = pool_.acquire(sample.db);
        r_verify = verify_correction(sample.predicted_sql, *resp.corrected_sql, *lease,
                                     sample.gold_sql, std::nullopt,
                                     MatchConfig{cfg_.exec, cfg_.compare});
      } catch (const Error& e) {
        out.diagnostics.push_back("VERIFY_SKIPPED: " + std::string(to_string(e.code())) + ": " + e.what());
      }
      timing.verify_ms += ms_since(t0);
    }

    t0 = Clock::now();
    out.breakdown = total_reward(sample, resp, judgments, r_verify, mode,
                                 ScoringOptions{require_label});
    timing.reward_ms += ms_since(t0);
  } catch (const Error& e) {
    out.error_code = std::string(to_string(e.code()));
    out.error_message = e.what();
    out.breakdown.reset();
  } catch (const std::exception& e) {
    out.error_code = "INTERNAL";
    out.error_message = e.what();
    out.breakdown.reset();
  }
  return out;
}

ScoreResponse Scorer::score(const ScoreRequest& req) {
  const auto t0 = Clock::now();
  ScoreResponse resp;
  resp.group_id = req.group_id;
  resp.results.reserve(req.samples.size());
  for (std::size_t i = 0; i < req.samples.size(); ++i) {
    const json& record = req.samples[i];
    EvalSample sample;
    try {
      sample = sample_from_json(record, cfg_.db_root);
    } catch (const Error& e) {
      SampleResult bad;
      bad.sample_id = record.is_object() && record.contains("sample_id") &&
                              record["sample_id"].is_string()
                          ? record["sample_id"].get<std::string>()
                          : "#" + std::to_string(i);
      bad.error_code = std::string(to_string(e.code()));
      bad.error_message = e.what();
      resp.results.push_back(std::move(bad));
      continue;
    }
    resp.results.push_back(score_sample(sample, req.mode, req.judge, req.require_label, resp.timing));
  }

  if (req.group_id) {
    std::vector<double> totals;
    for (const auto& r : resp.results) {
      if (r.breakdown && r.breakdown->total) totals.push_back(*r.breakdown->total);
    }
    if (totals.size() == resp.results.size()) {
      resp.advantages = group_advantages(totals, cfg_.grpo);
    } else {
      resp.advantages_error = "group contains samples without a total reward";
    }
  }
  resp.timing.total_ms = ms_since(t0);
  return resp;
}

json advantages_endpoint(const json& body, const GrpoConfig& defaults) {
  if (!body.is_object()) throw RequestError("request body must be a JSON object");
  GrpoConfig cfg = defaults;
  json groups;
  for (const auto& [key, value] : body.items()) {
    if (key == "groups") {
      if (!value.is_array() || value.empty()) throw RequestError("'groups' must be a non-empty array");
      groups = value;
    } else if (key == "normalize_std") {
      if (!value.is_boolean()) throw RequestError("'normalize_std' must be a boolean");
      cfg.normalize_std = value.get<bool>();
    } else if (key == "std_floor") {
      if (!value.is_number() || !(value.get<double>() > 0.0)) throw RequestError("'std_floor' must be > 0");
      cfg.std_floor = value.get<double>();
    } else {
      throw RequestError("unknown request key '" + key + "'");
    }
  }
  if (groups.is_null()) throw RequestError("missing 'groups'");

  json out_groups = json::array();
  for (const auto& g : groups) {
    if (!g.is_object() || !g.contains("rewards") || !g["rewards"].is_array()) {
      throw RequestError("each group needs a 'rewards' array");
    }
    std::vector<double> rewards;
    for (const auto& r : g["rewards"]) {
      if (!r.is_number()) throw RequestError("rewards must be numbers");
      rewards.push_back(r.get<double>());
    }
    if (rewards.empty()) throw RequestError("a group must contain at least one reward");
    json item{{"group_id", g.value("group_id", json(nullptr))},
              {"advantages", group_advantages(rewards, cfg)}};
    out_groups.push_back(std::move(item));
  }
  return json{{"groups", std::move(out_groups)}};
}

}  // namespace sqlcritic
