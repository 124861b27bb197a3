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


// sqlcritic command-line tool.
//
// Exit codes: 0 success, 1 at least one per-item failure, 2 configuration or
// usage error. Per-item failures are written to stderr (or --error-log) as
// JSON lines.

#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sqlcritic/dataset.hpp"
#include "sqlcritic/error.hpp"
#include "sqlcritic/grpo_math.hpp"
#include "sqlcritic/metrics.hpp"
#include "sqlcritic/reward_service.hpp"
#include "sqlcritic/scoring_server.hpp"
#include "sqlcritic/sql_analysis.hpp"
#include "sqlcritic/synthesis_agents.hpp"

namespace {

using namespace sqlcritic;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kPartial = 1;
constexpr int kUsage = 2;

// Usage problems detected after CLI parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class ErrorLog {
 public:
  void open(const std::string& path) {
    if (path.empty()) return;
    file_.open(path, std::ios::app);
    if (!file_) throw UsageError("cannot open error log " + path);
  }
  void item(std::string_view command, const std::string& id, std::string_view code,
            const std::string& message) {
    ++count_;
    const json line{{"level", "error"}, {"command", command}, {"id", id},
                    {"code", code},     {"message", message}};
    (file_.is_open() ? static_cast<std::ostream&>(file_) : std::cerr) << line.dump() << '\n';
  }
  long count() const { return count_; }

 private:
  std::ofstream file_;
  long count_ = 0;
};

struct Common {
  std::string config_path;
  std::string db_root;
  std::string error_log;
};

ServiceConfig load_config(const Common& c) {
  ServiceConfig cfg = c.config_path.empty() ? ServiceConfig{} : ServiceConfig::load(c.config_path);
  cfg = cfg.with_env_overrides();
  if (!c.db_root.empty()) cfg.db_root = c.db_root;
  cfg.validate();
  return cfg;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) lines.push_back(line);
  }
  return lines;
}

std::vector<EvalSample> load_corpus(const std::string& path, const ServiceConfig& cfg) {
  if (!std::filesystem::exists(path)) throw UsageError("cannot read " + path);
  return read_corpus(path, cfg.db_root);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw UsageError("cannot write " + path);
  return out;
}

// ---------------------------------------------------------------------------

struct ScoreArgs {
  std::string input, output, mode, coefficients, outcome_source, judge = "stub", stub_mode, group_id;
  bool print = false;
  bool inference = false;
};

int cmd_score(const Common& common, const ScoreArgs& a, ErrorLog& log) {
  ServiceConfig cfg = load_config(common);
  if (!a.stub_mode.empty()) {
    const auto m = stub_mode_from_string(a.stub_mode);
    if (!m) throw UsageError("unknown stub mode " + a.stub_mode);
    cfg.stub_mode = *m;
  }
  json mode = mode_to_json(cfg.default_mode);
  if (!a.mode.empty()) mode["variant"] = a.mode;
  if (!a.coefficients.empty()) mode["coefficients"] = a.coefficients;
  if (!a.outcome_source.empty()) mode["outcome_source"] = a.outcome_source;

  std::vector<json> samples;
  for (const auto& line : read_lines(a.input)) {
    try {
      samples.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      // Kept so that it surfaces as a per-sample error in input order.
      samples.push_back(json{{"sample_id", "#" + std::to_string(samples.size())}, {"_invalid", e.what()}});
    }
  }
  if (samples.empty()) throw UsageError("no samples in " + a.input);

  Scorer scorer(cfg);
  std::ofstream out;
  if (!a.output.empty()) out = open_output(a.output);
  json all_results = json::array();
  std::vector<double> totals;
  bool totals_complete = true;
  for (std::size_t start = 0; start < samples.size(); start += cfg.max_batch) {
    json body{{"mode", mode}, {"judge", a.judge}, {"require_label", !a.inference}, {"samples", json::array()}};
    for (std::size_t i = start; i < std::min(samples.size(), start + cfg.max_batch); ++i) {
      body["samples"].push_back(samples[i]);
    }
    ScoreRequest req;
    try {
      req = parse_score_request(body, cfg);
    } catch (const RequestError& e) {
      throw UsageError(e.what());
    }
    const auto resp = scorer.score(req);
    const json j = response_to_json(resp, false);
    for (const auto& r : j["results"]) {
      if (!r["ok"].get<bool>()) {
        log.item("score", r["sample_id"], r["error"]["code"].get<std::string>(),
                 r["error"]["message"].get<std::string>());
      }
      if (r["breakdown"].is_object() && r["breakdown"]["total"].is_number()) {
        totals.push_back(r["breakdown"]["total"].get<double>());
      } else {
        totals_complete = false;
      }
      if (out.is_open()) out << r.dump() << '\n';
      all_results.push_back(r);
    }
  }
  json summary{{"samples", samples.size()}, {"failures", log.count()}};
  if (!a.group_id.empty()) {
    summary["group_id"] = a.group_id;
    if (totals_complete) {
      summary["advantages"] = group_advantages(totals, cfg.grpo);
    } else {
      summary["advantages"] = nullptr;
      log.item("score", a.group_id, "INCOMPLETE_GROUP", "a group member has no total reward");
    }
  }
  if (a.print) {
    for (const auto& r : all_results) std::cout << r.dump() << '\n';
  }
  std::cout << summary.dump() << '\n';
  return log.count() > 0 ? kPartial : kOk;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string corpus, output;
  bool json_out = false;
};

int cmd_evaluate(const Common& common, const EvalArgs& a, ErrorLog& log) {
  const ServiceConfig cfg = load_config(common);
  const auto corpus = load_corpus(a.corpus, cfg);
  std::vector<ScoredPrediction> items;
  for (const auto& s : corpus) {
    if (!s.label) {
      log.item("evaluate", s.sample_id, "LABEL_REQUIRED", "sample has no label");
      continue;
    }
    if (!s.critique_text) {
      log.item("evaluate", s.sample_id, "INVALID_ARGUMENT", "sample has no critique_text");
      continue;
    }
    // A critique without a parseable verdict counts as a False verdict.
    const bool verdict = parse_critique(*s.critique_text).verdict.value_or(false);
    const bool runs[] = {verdict};
    items.push_back({score_from_verdicts(runs), verdict, *s.label,
                     s.hardness == Hardness::kUnknown && s.gold_sql ? classify_hardness(*s.gold_sql)
                                                                    : s.hardness});
  }
  if (items.empty()) throw UsageError("no evaluable samples in " + a.corpus);
  const MetricReport report = grouped_report(items);
  if (!a.output.empty()) open_output(a.output) << report.to_json() << '\n';
  std::cout << (a.json_out ? report.to_json() + "\n" : report.to_tsv());
  return log.count() > 0 ? kPartial : kOk;
}

// ---------------------------------------------------------------------------

struct LabelArgs {
  std::string corpus, output, quarantine;
  int workers = 4;
};

int cmd_label(const Common& common, const LabelArgs& a, ErrorLog& log) {
  const ServiceConfig cfg = load_config(common);
  if (a.workers < 1) throw UsageError("--workers must be at least 1");
  const auto corpus = load_corpus(a.corpus, cfg);
  LabelConfig lc;
  lc.match = MatchConfig{cfg.exec, cfg.compare};
  const auto result = label_corpus(corpus, lc, a.workers);
  write_corpus(a.output, result.labeled);
  if (!a.quarantine.empty()) write_corpus(a.quarantine, result.quarantined);
  for (const auto& [id, msg] : result.errors) log.item("label", id, "LABEL_FAILED", msg);
  const auto stats = corpus_stats(result.labeled);
  std::cout << "labeled " << result.labeled.size() << ", quarantined " << result.quarantined.size()
            << ", errors " << result.errors.size() << '\n'
            << stats.to_text("labeled");
  return result.errors.empty() ? kOk : kPartial;
}

// ---------------------------------------------------------------------------

struct SynthArgs {
  std::string corpus, output, generator_endpoint, generator_key;
  int workers = 4;
  std::size_t memory_capacity = 64;
  double threshold = 0.9;
};

int cmd_synthesize(const Common& common, const SynthArgs& a, ErrorLog& log) {
  const ServiceConfig cfg = load_config(common);
  if (a.workers < 1) throw UsageError("--workers must be at least 1");
  if (a.threshold < 0.0 || a.threshold > 1.0) throw UsageError("--threshold must be in [0, 1]");
  const auto corpus = load_corpus(a.corpus, cfg);

  std::map<std::string, std::string> by_id;
  for (const auto& s : corpus) by_id[s.sample_id] = s.critique_text.value_or("");
  std::unique_ptr<ChatClient> generator;
  if (a.generator_endpoint.empty()) {
    // Offline mode replays each sample's stored critique.
    generator = std::make_unique<StubGenerator>([&by_id](const ChatRequest& r) {
      const auto id = sample_id_from_prompt(r);
      const auto it = id ? by_id.find(*id) : by_id.end();
      return it == by_id.end() ? std::string() : it->second;
    });
  } else {
    generator = std::make_unique<HttpChatClient>(a.generator_endpoint, a.generator_key);
  }

  SynthesisConfig sc;
  sc.workers = a.workers;
  sc.partial_match_threshold = a.threshold;
  sc.match = MatchConfig{cfg.exec, cfg.compare};
  MemoryBuffer memory(a.memory_capacity);
  SynthesisStats stats;
  if (!a.output.empty()) open_output(a.output);  // truncate; records are appended per wave
  const auto records = run_synthesis(corpus, *generator, *generator, memory,
                                     tree_similarity_hook(a.threshold), sc,
                                     a.output.empty() ? std::nullopt : std::optional<std::filesystem::path>(a.output),
                                     &stats);
  for (const auto& r : records) {
    if (r.align == AlignOutcome::kErrored) log.item("synthesize", r.sample.sample_id, "ERRORED", r.detail);
  }
  std::cout << json{{"samples", records.size()},
                    {"accepted", stats.accepted},
                    {"rejected_verdict", stats.rejected_verdict},
                    {"rejected_correction", stats.rejected_correction},
                    {"errored", stats.errored}}
                   .dump()
            << '\n';
  return stats.errored > 0 ? kPartial : kOk;
}

// ---------------------------------------------------------------------------

struct AdvArgs {
  std::string input, output;
  bool no_normalize = false;
  std::optional<double> std_floor;
};

int cmd_advantages(const Common& common, const AdvArgs& a, ErrorLog& log) {
  ServiceConfig cfg = load_config(common);
  if (a.no_normalize) cfg.grpo.normalize_std = false;
  if (a.std_floor) cfg.grpo.std_floor = *a.std_floor;
  cfg.grpo.validate();
  std::ofstream out;
  if (!a.output.empty()) out = open_output(a.output);
  int index = 0;
  for (const auto& line : read_lines(a.input)) {
    const std::string fallback = "#" + std::to_string(index++);
    std::string id = fallback;
    try {
      const json j = json::parse(line);
      id = j.value("group_id", fallback);
      const auto rewards = j.at("rewards").get<std::vector<double>>();
      const json row{{"group_id", id}, {"advantages", group_advantages(rewards, cfg.grpo)}};
      (out.is_open() ? static_cast<std::ostream&>(out) : std::cout) << row.dump() << '\n';
    } catch (const Error& e) {
      log.item("advantages", id, to_string(e.code()), e.what());
    } catch (const json::exception& e) {
      log.item("advantages", id, "PARSE", e.what());
    }
  }
  return log.count() > 0 ? kPartial : kOk;
}

// ---------------------------------------------------------------------------

std::atomic<bool> g_stop{false};
extern "C" void on_signal(int) { g_stop = true; }

struct ServeArgs {
  std::string host;
  int port = -1;
};

int cmd_serve(const Common& common, const ServeArgs& a) {
  ServiceConfig cfg = load_config(common);
  if (!a.host.empty()) cfg.host = a.host;
  if (a.port >= 0) cfg.port = a.port;
  cfg.validate();
  Scorer scorer(cfg);
  ScoringServer server(scorer);
  const int port = server.bind(cfg.host, cfg.port);
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  server.start();
  std::cout << json{{"listening", cfg.host + ":" + std::to_string(port)},
                    {"config_fingerprint", cfg.fingerprint()}}
                   .dump()
            << std::endl;
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  server.stop();
  return kOk;
}

// ---------------------------------------------------------------------------

struct StatsArgs {
  std::string corpus, column = "corpus";
  bool json_out = false;
};

int cmd_stats(const Common& common, const StatsArgs& a) {
  const ServiceConfig cfg = load_config(common);
  const auto stats = corpus_stats(load_corpus(a.corpus, cfg));
  std::cout << (a.json_out ? stats.to_json().dump(2) + "\n" : stats.to_text(a.column));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reward scoring and evaluation for text-to-SQL critiques"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--config", common.config_path, "JSON service configuration");
  app.add_option("--error-log", common.error_log, "Append per-item errors here instead of stderr");

  auto with_db = [&](CLI::App* sub) {
    sub->add_option("--db-root", common.db_root, "Directory holding <db_id>/<db_id>.sqlite");
  };

  ScoreArgs score;
  auto* s = app.add_subcommand("score", "Score critique responses");
  s->add_option("--input", score.input, "JSONL samples with critique_text")->required();
  s->add_option("--output", score.output, "JSONL results");
  s->add_option("--mode", score.mode, "ex, ex_pr or ex_pr_vc");
  s->add_option("--coefficients", score.coefficients, "static or static_dynamic");
  s->add_option("--outcome-source", score.outcome_source, "result_tag, rubric_flags or literal_xor");
  s->add_option("--judge", score.judge, "stub or live")->check(CLI::IsMember({"stub", "live"}));
  s->add_option("--stub-mode", score.stub_mode, "Stub judge behaviour");
  s->add_option("--group-id", score.group_id, "Treat the input as one rollout group");
  s->add_flag("--print", score.print, "Print each result to stdout");
  s->add_flag("--inference", score.inference, "Do not require labels");
  with_db(s);

  EvalArgs eval;
  auto* e = app.add_subcommand("evaluate", "Classification metrics of critique verdicts");
  e->add_option("--corpus", eval.corpus)->required();
  e->add_option("--output", eval.output, "JSON report");
  e->add_flag("--json", eval.json_out);
  with_db(e);

  LabelArgs label;
  auto* l = app.add_subcommand("label", "Label samples by executing against gold");
  l->add_option("--corpus", label.corpus)->required();
  l->add_option("--output", label.output)->required();
  l->add_option("--quarantine", label.quarantine, "Samples whose gold query fails");
  l->add_option("--workers", label.workers);
  with_db(l);

  SynthArgs synth;
  auto* y = app.add_subcommand("synthesize", "Generate and align critiques");
  y->add_option("--corpus", synth.corpus)->required();
  y->add_option("--output", synth.output);
  y->add_option("--workers", synth.workers);
  y->add_option("--memory-capacity", synth.memory_capacity);
  y->add_option("--threshold", synth.threshold, "Partial-match similarity threshold");
  y->add_option("--generator-endpoint", synth.generator_endpoint, "Chat endpoint; stub replay when empty");
  y->add_option("--generator-key", synth.generator_key)->envname("RUCO_GENERATOR_KEY");
  with_db(y);

  AdvArgs adv;
  auto* v = app.add_subcommand("advantages", "Group-relative advantages from reward groups");
  v->add_option("--input", adv.input, "JSONL {group_id, rewards}")->required();
  v->add_option("--output", adv.output);
  v->add_flag("--no-normalize", adv.no_normalize);
  v->add_option("--std-floor", adv.std_floor);

  ServeArgs serve;
  auto* r = app.add_subcommand("serve", "Run the HTTP scoring service");
  r->add_option("--host", serve.host);
  r->add_option("--port", serve.port)->check(CLI::Range(0, 65535));
  with_db(r);

  StatsArgs stats;
  auto* t = app.add_subcommand("stats", "Corpus statistics table");
  t->add_option("--corpus", stats.corpus)->required();
  t->add_option("--column", stats.column);
  t->add_flag("--json", stats.json_out);
  with_db(t);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex);
    return kUsage;
  }

  ErrorLog log;
  try {
    log.open(common.error_log);
    if (s->parsed()) return cmd_score(common, score, log);
    if (e->parsed()) return cmd_evaluate(common, eval, log);
    if (l->parsed()) return cmd_label(common, label, log);
    if (y->parsed()) return cmd_synthesize(common, synth, log);
    if (v->parsed()) return cmd_advantages(common, adv, log);
    if (r->parsed()) return cmd_serve(common, serve);
    if (t->parsed()) return cmd_stats(common, stats);
  } catch (const UsageError& ex) {
    std::cerr << json{{"level", "fatal"}, {"code", "CONFIG"}, {"message", ex.what()}}.dump() << '\n';
    return kUsage;
  } catch (const Error& ex) {
    std::cerr << json{{"level", "fatal"}, {"code", to_string(ex.code())}, {"message", ex.what()}}.dump() << '\n';
    return ex.code() == ErrorCode::kConfig ? kUsage : kPartial;
  } catch (const std::exception& ex) {
    std::cerr << json{{"level", "fatal"}, {"code", "INTERNAL"}, {"message", ex.what()}}.dump() << '\n';
    return kPartial;
  }
  return kUsage;
}
