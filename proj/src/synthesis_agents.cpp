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


#include "sqlcritic/synthesis_agents.hpp"

#include <algorithm>
#include <sstream>
#include <thread>

#include "sqlcritic/dataset.hpp"
#include "sqlcritic/error.hpp"
#include "sqlcritic/sql_analysis.hpp"

namespace sqlcritic {
namespace {

constexpr std::string_view kFeedbackSystem =
    "You review SQL written for a natural-language question. Inspect the predicted SQL by "
    "asking yourself numbered questions about each item that needs checking and answering "
    "each one with concrete evidence from the question and schema. Put the numbered steps "
    "inside <think></think>. Then state the judgment as <result> True </result> when the SQL "
    "answers the question correctly, or <result> False </result> otherwise. When the result is "
    "False, give the fixed query inside <correctedSQL></correctedSQL>.";

constexpr std::string_view kCorrectionSystem =
    "You repair SQL queries. Given the question, the schema, a faulty query and a critique of "
    "it, reply with only the corrected SQL inside <correctedSQL></correctedSQL>.";

constexpr std::string_view kIdPrefix = "Sample ID: ";

std::string truncate_utf8(std::string s, std::size_t cap) {
  if (s.size() <= cap) return s;
  std::size_t cut = cap;
  while (cut > 0 && (static_cast<unsigned char>(s[cut]) & 0xC0) == 0x80) --cut;
  s.resize(cut);
  return s;
}

std::string sample_block(const EvalSample& s) {
  std::ostringstream out;
  out << kIdPrefix << s.sample_id << "\n\n"
      << "Question:\n" << s.question << "\n\n"
      << "Database schema:\n" << s.schema_text << "\n\n"
      << "Predicted SQL:\n" << s.predicted_sql << "\n";
  return out.str();
}

std::optional<std::string> extract_corrected_block(const std::string& text) {
  const auto open = text.find("<correctedSQL>");
  const auto close = text.rfind("</correctedSQL>");
  std::string body;
  if (open != std::string::npos && close != std::string::npos && close > open) {
    body = text.substr(open + 14, close - open - 14);
  } else {
    body = text;
  }
  // Strip a code fence around the query.
  if (auto f = body.find("```"); f != std::string::npos) {
    auto line_end = body.find('\n', f);
    auto g = line_end == std::string::npos ? std::string::npos : body.find("```", line_end);
    if (g != std::string::npos) body = body.substr(line_end + 1, g - line_end - 1);
  }
  const auto b = body.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return std::nullopt;
  const auto e = body.find_last_not_of(" \t\r\n");
  return body.substr(b, e - b + 1);
}

}  // namespace

std::string_view to_string(AlignOutcome a) {
  switch (a) {
    case AlignOutcome::kAccepted: return "ACCEPTED";
    case AlignOutcome::kRejectedVerdict: return "REJECTED_VERDICT";
    case AlignOutcome::kRejectedCorrection: return "REJECTED_CORRECTION";
    case AlignOutcome::kErrored: return "ERRORED";
  }
  return "ERRORED";
}

std::optional<AlignOutcome> align_outcome_from_string(std::string_view s) {
  for (auto a : {AlignOutcome::kAccepted, AlignOutcome::kRejectedVerdict,
                 AlignOutcome::kRejectedCorrection, AlignOutcome::kErrored}) {
    if (to_string(a) == s) return a;
  }
  return std::nullopt;
}

MemoryBuffer::MemoryBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw Error(ErrorCode::kConfig, "memory capacity must be >= 1");
}

void MemoryBuffer::append(std::string sample_id, std::string summary, AlignOutcome align) {
  std::lock_guard lock(mu_);
  entries_.push_back(MemoryEntry{next_seq_++, std::move(sample_id), std::move(summary), align});
  while (entries_.size() > capacity_) entries_.pop_front();
}

std::vector<MemoryEntry> MemoryBuffer::recent(std::size_t k) const {
  std::lock_guard lock(mu_);
  std::vector<MemoryEntry> out;
  for (auto it = entries_.rbegin(); it != entries_.rend() && out.size() < k; ++it) {
    out.push_back(*it);
  }
  return out;
}

std::vector<MemoryEntry> MemoryBuffer::snapshot() const {
  std::lock_guard lock(mu_);
  return {entries_.begin(), entries_.end()};
}

std::size_t MemoryBuffer::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

std::string summarize_critique(const CritiqueResponse& resp, std::size_t cap) {
  std::string out = "verdict=";
  out += resp.verdict ? (*resp.verdict ? "True" : "False") : "none";
  for (const auto& step : resp.steps) {
    if (!step.flags_error) continue;
    out += "; ";
    out += step.question;
  }
  return truncate_utf8(std::move(out), cap);
}

ChatRequest render_feedback_prompt(const EvalSample& sample,
                                   const std::vector<MemoryEntry>& history,
                                   const SynthesisConfig& cfg) {
  std::string user = sample_block(sample);
  if (!history.empty()) {
    user += "\nRecent feedback history:\n";
    for (const auto& e : history) {
      user += "- [" + e.sample_id + ", " + std::string(to_string(e.align)) + "] " +
              truncate_utf8(e.summary, cfg.summary_cap) + "\n";
    }
  }
  return ChatRequest{cfg.model,
                     {{"system", std::string(kFeedbackSystem)}, {"user", std::move(user)}},
                     cfg.temperature};
}

ChatRequest render_correction_prompt(const EvalSample& sample, const CritiqueResponse& critique,
                                     const SynthesisConfig& cfg) {
  std::string user = sample_block(sample);
  user += "\nCritique:\n" + to_tagged_text(critique);
  return ChatRequest{cfg.model,
                     {{"system", std::string(kCorrectionSystem)}, {"user", std::move(user)}},
                     cfg.temperature};
}

std::optional<std::string> sample_id_from_prompt(const ChatRequest& request) {
  for (const auto& m : request.messages) {
    if (m.role != "user" || m.content.rfind(kIdPrefix, 0) != 0) continue;
    const auto end = m.content.find('\n');
    return m.content.substr(kIdPrefix.size(), end == std::string::npos
                                                  ? std::string::npos
                                                  : end - kIdPrefix.size());
  }
  return std::nullopt;
}

bool is_correction_prompt(const ChatRequest& request) {
  return !request.messages.empty() && request.messages.front().content == kCorrectionSystem;
}

CritiqueResponse generate_feedback(const EvalSample& sample, const MemoryBuffer& memory,
                                   ChatClient& generator, const SynthesisConfig& cfg) {
  const ChatRequest req = render_feedback_prompt(sample, memory.recent(cfg.memory_k), cfg);
  const int attempts = 1 + std::max(0, cfg.format_retries);
  std::string last_problem;
  for (int i = 0; i < attempts; ++i) {
    std::string text;
    try {
      text = generator.complete(req);
    } catch (const TransportError& e) {
      throw Error(ErrorCode::kGeneratorUnavailable, e.what());
    }
    CritiqueResponse resp = parse_critique(text);
    if (resp.format.valid) return resp;
    last_problem.clear();
    for (auto v : resp.format.violations) {
      if (!last_problem.empty()) last_problem += ",";
      last_problem += to_string(v);
    }
  }
  throw Error(ErrorCode::kPersistentFormatFailure,
              "sample '" + sample.sample_id + "': generator output malformed after " +
                  std::to_string(attempts) + " attempts (" + last_problem + ")");
}

std::string correct_sql(const EvalSample& sample, const CritiqueResponse& critique,
                        ChatClient& corrector, const SynthesisConfig& cfg) {
  if (!critique.verdict || *critique.verdict) {
    throw Error(ErrorCode::kPrecondition, "correction requires a False verdict");
  }
  if (critique.corrected_sql && !critique.corrected_sql->empty()) return *critique.corrected_sql;
  std::string text;
  try {
    text = corrector.complete(render_correction_prompt(sample, critique, cfg));
  } catch (const TransportError& e) {
    throw Error(ErrorCode::kGeneratorUnavailable, e.what());
  }
  auto sql = extract_corrected_block(text);
  if (!sql) {
    throw Error(ErrorCode::kPersistentFormatFailure,
                "sample '" + sample.sample_id + "': empty correction");
  }
  return *sql;
}

PartialMatchHook tree_similarity_hook(double threshold) {
  return [threshold](std::string_view corrected, std::string_view gold) {
    try {
      return structural_similarity(corrected, gold) >= threshold;
    } catch (const Error&) {
      return false;
    }
  };
}

AlignOutcome align_filter(const SynthesisRecord& record, Database& db,
                          const std::optional<std::string>& gold,
                          const PartialMatchHook& partial_match, const MatchConfig& cfg) {
  if (!gold) throw Error(ErrorCode::kMissingGold, "align filter needs a gold query");
  const auto& verdict = record.critique.verdict;
  if (!verdict) return AlignOutcome::kRejectedVerdict;

  const MatchOutcome pred = exec_match(record.sample.predicted_sql, *gold, db, cfg);
  if (pred == MatchOutcome::kRefError) return AlignOutcome::kErrored;
  const bool exec_label = pred == MatchOutcome::kEquiv;
  if (*verdict == exec_label) return AlignOutcome::kAccepted;
  if (*verdict) return AlignOutcome::kRejectedVerdict;

  const auto& corrected = record.critique.corrected_sql;
  if (!corrected || corrected->empty()) return AlignOutcome::kRejectedCorrection;
  if (exec_match(*corrected, *gold, db, cfg) == MatchOutcome::kEquiv) {
    return AlignOutcome::kAccepted;
  }
  if (partial_match && partial_match(*corrected, *gold)) return AlignOutcome::kAccepted;
  return AlignOutcome::kRejectedCorrection;
}

nlohmann::json record_to_json(const SynthesisRecord& r) {
  EvalSample s = r.sample;
  if (!r.critique.raw.empty() || !r.critique.steps.empty()) {
    s.critique_text = r.critique.format.valid ? to_tagged_text(r.critique) : r.critique.raw;
  }
  nlohmann::json j = sample_to_json(s);
  j["align"] = std::string(to_string(r.align));
  j["detail"] = r.detail;
  return j;
}

std::vector<SynthesisRecord> run_synthesis(const std::vector<EvalSample>& corpus,
                                           ChatClient& feedback_gen, ChatClient& corrector,
                                           MemoryBuffer& memory,
                                           const PartialMatchHook& partial_match,
                                           const SynthesisConfig& cfg,
                                           const std::optional<std::filesystem::path>& output,
                                           SynthesisStats* stats) {
  std::vector<SynthesisRecord> records(corpus.size());
  ConnectionPool pool;
  const std::size_t wave = static_cast<std::size_t>(std::clamp(cfg.workers, 1, 64));

  auto process = [&](std::size_t i, const MemoryBuffer& view) {
    SynthesisRecord& rec = records[i];
    rec.sample = corpus[i];
    try {
      rec.critique = generate_feedback(rec.sample, view, feedback_gen, cfg);
      if (rec.critique.verdict && !*rec.critique.verdict) {
        rec.critique.corrected_sql = correct_sql(rec.sample, rec.critique, corrector, cfg);
      }
      if (!rec.sample.gold_sql) throw Error(ErrorCode::kMissingGold, "sample has no gold SQL");
      auto lease = pool.acquire(rec.sample.db);
      rec.align = align_filter(rec, *lease, rec.sample.gold_sql, partial_match, cfg.match);
    } catch (const std::exception& e) {
      rec.align = AlignOutcome::kErrored;
      rec.detail = e.what();
    }
  };

  for (std::size_t start = 0; start < corpus.size(); start += wave) {
    const std::size_t end = std::min(corpus.size(), start + wave);
    {
      std::vector<std::jthread> threads;
      for (std::size_t i = start; i < end; ++i) {
        threads.emplace_back([&, i] { process(i, memory); });
      }
    }
    for (std::size_t i = start; i < end; ++i) {
      const auto& rec = records[i];
      memory.append(rec.sample.sample_id, summarize_critique(rec.critique, cfg.summary_cap),
                    rec.align);
      if (output) append_jsonl(*output, record_to_json(rec));
      if (stats) {
        switch (rec.align) {
          case AlignOutcome::kAccepted: ++stats->accepted; break;
          case AlignOutcome::kRejectedVerdict: ++stats->rejected_verdict; break;
          case AlignOutcome::kRejectedCorrection: ++stats->rejected_correction; break;
          case AlignOutcome::kErrored: ++stats->errored; break;
        }
      }
    }
  }
  return records;
}

}  // namespace sqlcritic
