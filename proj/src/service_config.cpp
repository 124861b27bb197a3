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


#include "sqlcritic/service_config.hpp"

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>

#include "sqlcritic/error.hpp"

namespace sqlcritic {
namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw Error(ErrorCode::kConfig, "unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) {
    try {
      out = it->get<T>();
    } catch (const json::exception&) {
      throw Error(ErrorCode::kConfig, std::string("config key '") + key + "' has the wrong type");
    }
  }
}

const json& object_at(const json& j, const char* key) {
  static const json kEmpty = json::object();
  auto it = j.find(key);
  if (it == j.end()) return kEmpty;
  if (!it->is_object()) throw Error(ErrorCode::kConfig, std::string("'") + key + "' must be an object");
  return *it;
}

}  // namespace

void ServiceConfig::validate() const {
  if (max_batch < 1) throw Error(ErrorCode::kConfig, "max_batch must be >= 1");
  if (exec.timeout.count() <= 0) throw Error(ErrorCode::kConfig, "exec timeout must be > 0");
  if (exec.row_cap < 1) throw Error(ErrorCode::kConfig, "row_cap must be >= 1");
  if (!(compare.float_tol >= 0.0)) throw Error(ErrorCode::kConfig, "float_tol must be >= 0");
  if (port < 0 || port > 65535) throw Error(ErrorCode::kConfig, "port out of range");
  if (hyper.batch_size < 1 || hyper.rollouts < 1 || !(hyper.learning_rate > 0.0)) {
    throw Error(ErrorCode::kConfig, "hyperparameters must be positive");
  }
  grpo.validate();
  judge.validate();
}

ServiceConfig ServiceConfig::from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kConfig, "config must be an object");
  reject_unknown(j,
                 {"db_root", "judge", "stub_mode", "max_batch", "exec", "mode", "grpo",
                  "hyperparameters", "host", "port"},
                 "config");
  ServiceConfig c;
  std::string s;
  if (j.contains("db_root")) {
    read(j, "db_root", s);
    c.db_root = s;
  }
  read(j, "max_batch", c.max_batch);
  read(j, "host", c.host);
  read(j, "port", c.port);
  if (j.contains("stub_mode")) {
    read(j, "stub_mode", s);
    auto m = stub_mode_from_string(s);
    if (!m) throw Error(ErrorCode::kConfig, "unknown stub_mode '" + s + "'");
    c.stub_mode = *m;
  }

  const json& jj = object_at(j, "judge");
  reject_unknown(jj, {"endpoint", "model_name", "temperature", "max_parallel", "retry_limit",
                      "api_key", "timeout_ms"},
                 "judge");
  read(jj, "endpoint", c.judge.endpoint);
  read(jj, "model_name", c.judge.model_name);
  read(jj, "temperature", c.judge.temperature);
  read(jj, "max_parallel", c.judge.max_parallel);
  read(jj, "retry_limit", c.judge.retry_limit);
  read(jj, "api_key", c.judge.api_key);
  long long ms = c.judge.timeout.count();
  read(jj, "timeout_ms", ms);
  c.judge.timeout = std::chrono::milliseconds(ms);

  const json& je = object_at(j, "exec");
  reject_unknown(je, {"timeout_ms", "row_cap", "float_tol", "ignore_column_order"}, "exec");
  ms = c.exec.timeout.count();
  read(je, "timeout_ms", ms);
  c.exec.timeout = std::chrono::milliseconds(ms);
  read(je, "row_cap", c.exec.row_cap);
  read(je, "float_tol", c.compare.float_tol);
  read(je, "ignore_column_order", c.compare.ignore_column_order);

  const json& jm = object_at(j, "mode");
  reject_unknown(jm, {"variant", "coefficients", "outcome_source"}, "mode");
  if (jm.contains("variant")) {
    read(jm, "variant", s);
    auto v = variant_from_string(s);
    if (!v) throw Error(ErrorCode::kConfig, "unknown reward variant '" + s + "'");
    c.default_mode.variant = *v;
  }
  if (jm.contains("coefficients")) {
    read(jm, "coefficients", s);
    auto v = coefficients_from_string(s);
    if (!v) throw Error(ErrorCode::kConfig, "unknown coefficient mode '" + s + "'");
    c.default_mode.coefficients = *v;
  }
  if (jm.contains("outcome_source")) {
    read(jm, "outcome_source", s);
    auto v = outcome_source_from_string(s);
    if (!v) throw Error(ErrorCode::kConfig, "unknown outcome source '" + s + "'");
    c.default_mode.outcome_source = *v;
  }

  const json& jg = object_at(j, "grpo");
  reject_unknown(jg, {"clip_eps", "kl_beta", "normalize_std", "std_floor"}, "grpo");
  read(jg, "clip_eps", c.grpo.clip_eps);
  read(jg, "kl_beta", c.grpo.kl_beta);
  read(jg, "normalize_std", c.grpo.normalize_std);
  read(jg, "std_floor", c.grpo.std_floor);

  const json& jh = object_at(j, "hyperparameters");
  reject_unknown(jh, {"batch_size", "learning_rate", "rollouts"}, "hyperparameters");
  read(jh, "batch_size", c.hyper.batch_size);
  read(jh, "learning_rate", c.hyper.learning_rate);
  read(jh, "rollouts", c.hyper.rollouts);

  c.validate();
  return c;
}

ServiceConfig ServiceConfig::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::kConfig, "cannot read config " + file.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kConfig, file.string() + ": " + e.what());
  }
  return from_json(j);
}

json ServiceConfig::to_json() const {
  return json{
      {"db_root", db_root.string()},
      {"stub_mode", std::string(to_string(stub_mode))},
      {"max_batch", max_batch},
      {"host", host},
      {"port", port},
      {"judge",
       {{"endpoint", judge.endpoint},
        {"model_name", judge.model_name},
        {"temperature", judge.temperature},
        {"max_parallel", judge.max_parallel},
        {"retry_limit", judge.retry_limit},
        {"timeout_ms", judge.timeout.count()}}},
      {"exec",
       {{"timeout_ms", exec.timeout.count()},
        {"row_cap", exec.row_cap},
        {"float_tol", compare.float_tol},
        {"ignore_column_order", compare.ignore_column_order}}},
      {"mode",
       {{"variant", std::string(to_string(default_mode.variant))},
        {"coefficients", std::string(to_string(default_mode.coefficients))},
        {"outcome_source", std::string(to_string(default_mode.outcome_source))}}},
      {"grpo",
       {{"clip_eps", grpo.clip_eps},
        {"kl_beta", grpo.kl_beta},
        {"normalize_std", grpo.normalize_std},
        {"std_floor", grpo.std_floor}}},
      {"hyperparameters",
       {{"batch_size", hyper.batch_size},
        {"learning_rate", hyper.learning_rate},
        {"rollouts", hyper.rollouts}}},
  };
}

ServiceConfig ServiceConfig::with_env_overrides() const {
  ServiceConfig c = *this;
  c.judge = c.judge.with_env_overrides();
  if (const char* v = std::getenv("RUCO_DB_ROOT"); v && *v) c.db_root = v;
  if (const char* v = std::getenv("RUCO_MAX_BATCH"); v && *v) {
    char* end = nullptr;
    const long long n = std::strtoll(v, &end, 10);
    if (*end != '\0' || n < 1) throw Error(ErrorCode::kConfig, "RUCO_MAX_BATCH must be a positive integer");
    c.max_batch = static_cast<std::size_t>(n);
  }
  return c;
}

std::string ServiceConfig::fingerprint() const {
  const std::string text = to_json().dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sqlcritic
