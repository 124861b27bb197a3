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
#include <deque>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sqlcritic/chat_client.hpp"
#include "sqlcritic/critique_parser.hpp"
#include "sqlcritic/sql_exec.hpp"
#include "sqlcritic/types.hpp"

namespace sqlcritic {

enum class AlignOutcome { kAccepted, kRejectedVerdict, kRejectedCorrection, kErrored };
std::string_view to_string(AlignOutcome a);
std::optional<AlignOutcome> align_outcome_from_string(std::string_view s);

struct MemoryEntry {
  std::uint64_t seq = 0;  // insertion order, starting at 1
  std::string sample_id;
  std::string summary;
  AlignOutcome align = AlignOutcome::kErrored;

  bool operator==(const MemoryEntry&) const = default;
};

// Bounded feedback history; the oldest entry is evicted first.
class MemoryBuffer {
 public:
  explicit MemoryBuffer(std::size_t capacity = 64);

  void append(std::string sample_id, std::string summary, AlignOutcome align);
  // Up to k newest entries, newest first.
  std::vector<MemoryEntry> recent(std::size_t k) const;
  // All entries, oldest first.
  std::vector<MemoryEntry> snapshot() const;
  std::size_t size() const;
  std::size_t capacity() const { return capacity_; }

 private:
  std::size_t capacity_;
  std::uint64_t next_seq_ = 1;
  mutable std::mutex mu_;
  std::deque<MemoryEntry> entries_;
};

struct SynthesisConfig {
  std::string model = "generator";
  double temperature = 0.0;
  std::size_t memory_k = 3;
  std::size_t summary_cap = 200;
  int format_retries = 1;
  double partial_match_threshold = 0.9;
  MatchConfig match;
  int workers = 4;
};

// One-line digest of a critique for the memory buffer, at most `cap` bytes.
std::string summarize_critique(const CritiqueResponse& resp, std::size_t cap = 200);

ChatRequest render_feedback_prompt(const EvalSample& sample,
                                   const std::vector<MemoryEntry>& history,
                                   const SynthesisConfig& cfg = {});
ChatRequest render_correction_prompt(const EvalSample& sample, const CritiqueResponse& critique,
                                     const SynthesisConfig& cfg = {});

// Reads the "Sample ID:" line that both prompt templates start with.
std::optional<std::string> sample_id_from_prompt(const ChatRequest& request);
// Whether the request was rendered by render_correction_prompt.
bool is_correction_prompt(const ChatRequest& request);

// Asks the generator for a critique conditioned on the newest memory entries.
// A malformed reply is retried format_retries times. Throws
// Error(kPersistentFormatFailure) or Error(kGeneratorUnavailable).
CritiqueResponse generate_feedback(const EvalSample& sample, const MemoryBuffer& memory,
                                   ChatClient& generator, const SynthesisConfig& cfg = {});

// The critique's own corrected block when present, else a dedicated
// correction prompt. Throws Error(kPrecondition) unless the verdict is False.
std::string correct_sql(const EvalSample& sample, const CritiqueResponse& critique,
                        ChatClient& corrector, const SynthesisConfig& cfg = {});

// Second validation stage: accepts a corrected query that is close enough to
// the gold query without executing it.
using PartialMatchHook = std::function<bool(std::string_view corrected, std::string_view gold)>;
PartialMatchHook tree_similarity_hook(double threshold = 0.9);

struct SynthesisRecord {
  EvalSample sample;
  CritiqueResponse critique;
  AlignOutcome align = AlignOutcome::kErrored;
  std::string detail;  // error message for ERRORED records
};

// ACCEPTED iff the verdict equals the execution label of the predicted SQL,
// or the verdict is False and the corrected SQL executes equivalently to the
// gold query or passes the partial-match hook. Database failures give ERRORED.
AlignOutcome align_filter(const SynthesisRecord& record, Database& db,
                          const std::optional<std::string>& gold,
                          const PartialMatchHook& partial_match, const MatchConfig& cfg = {});

// Dataset record with the critique text plus "align" and "detail" fields.
nlohmann::json record_to_json(const SynthesisRecord& r);

// Chat client backed by a function, for offline generation.
class StubGenerator : public ChatClient {
 public:
  using Fn = std::function<std::string(const ChatRequest&)>;
  explicit StubGenerator(Fn fn) : fn_(std::move(fn)) {}
  std::string complete(const ChatRequest& request) override { return fn_(request); }

 private:
  Fn fn_;
};

struct SynthesisStats {
  long accepted = 0, rejected_verdict = 0, rejected_correction = 0, errored = 0;
};

// Full pipeline over a corpus: feedback, correction, alignment, memory update.
// Samples run `workers` at a time; each wave sees the memory as of its start
// and writes back in input order, so stub runs are deterministic. Records are
// appended to `output` when it is set.
std::vector<SynthesisRecord> run_synthesis(const std::vector<EvalSample>& corpus,
                                           ChatClient& feedback_gen, ChatClient& corrector,
                                           MemoryBuffer& memory,
                                           const PartialMatchHook& partial_match,
                                           const SynthesisConfig& cfg = {},
                                           const std::optional<std::filesystem::path>& output = {},
                                           SynthesisStats* stats = nullptr);

}  // namespace sqlcritic
