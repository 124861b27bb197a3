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
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sqlcritic/types.hpp"

struct sqlite3;

namespace sqlcritic {

struct Null {
  bool operator==(const Null&) const = default;
};
using Blob = std::vector<std::uint8_t>;
using Cell = std::variant<Null, std::int64_t, double, std::string, Blob>;

struct QueryResult {
  std::size_t columns = 0;
  std::vector<std::vector<Cell>> rows;
  bool truncated = false;
};

enum class ExecErrorKind { kSyntax, kSchema, kTimeout, kResource };
std::string_view to_string(ExecErrorKind kind);

struct ExecError {
  ExecErrorKind kind;
  std::string message;
  std::chrono::milliseconds elapsed{0};
};

using ExecOutcome = std::variant<QueryResult, ExecError>;

inline bool is_ok(const ExecOutcome& o) { return std::holds_alternative<QueryResult>(o); }

struct ExecOptions {
  std::chrono::milliseconds timeout{30'000};
  std::size_t row_cap = 100'000;
};

// Read-only connection to one SQLite file. Move-only.
class Database {
 public:
  // Throws Error(kDbUnavailable) if the file is missing or cannot be opened.
  explicit Database(const DatabaseRef& ref);
  ~Database();
  Database(Database&& other) noexcept;
  Database& operator=(Database&& other) noexcept;
  Database(const Database&) = delete;
  Database& operator=(const Database&) = delete;

  const DatabaseRef& ref() const { return ref_; }

  // Executes one read-only query. Writes are rejected as kSchema errors.
  ExecOutcome execute(std::string_view sql, const ExecOptions& opts = {});

 private:
  DatabaseRef ref_;
  sqlite3* handle_ = nullptr;
};

// Connections keyed by database path. A lease owns its connection until it is
// destroyed, so a connection is never used by two executions at once.
class ConnectionPool {
 public:
  class Lease {
   public:
    Lease(ConnectionPool* pool, std::unique_ptr<Database> db)
        : pool_(pool), db_(std::move(db)) {}
    ~Lease();
    Lease(Lease&&) noexcept = default;
    Lease& operator=(Lease&&) = delete;
    Database& operator*() { return *db_; }
    Database* operator->() { return db_.get(); }

   private:
    ConnectionPool* pool_;
    std::unique_ptr<Database> db_;
  };

  explicit ConnectionPool(std::size_t max_idle_per_db = 4)
      : max_idle_per_db_(max_idle_per_db) {}

  Lease acquire(const DatabaseRef& ref);
  std::size_t idle_count() const;

 private:
  void release(std::unique_ptr<Database> db);

  std::size_t max_idle_per_db_;
  mutable std::mutex mu_;
  std::map<std::filesystem::path, std::vector<std::unique_ptr<Database>>> idle_;
};

ExecOutcome execute(std::string_view sql, const DatabaseRef& db,
                    const ExecOptions& opts = {});

struct CompareOptions {
  // Relative-or-absolute: |a - b| <= tol * max(1, |a|, |b|).
  double float_tol = 1e-6;
  // Match columns up to a permutation instead of by position.
  bool ignore_column_order = false;
};

bool cells_equal(const Cell& a, const Cell& b, double float_tol);

bool results_equivalent(const QueryResult& a, const QueryResult& b,
                        bool order_sensitive, double float_tol = 1e-6);
bool results_equivalent(const QueryResult& a, const QueryResult& b,
                        bool order_sensitive, const CompareOptions& opts);

enum class MatchOutcome { kEquiv, kNotEquiv, kPredError, kRefError };
std::string_view to_string(MatchOutcome m);

struct MatchConfig {
  ExecOptions exec;
  CompareOptions compare;
};

struct MatchDetail {
  MatchOutcome outcome = MatchOutcome::kNotEquiv;
  bool order_sensitive = false;
  std::optional<ExecError> pred_error;
  std::optional<ExecError> ref_error;
};

// Order sensitivity is taken from the reference query.
MatchDetail exec_match_detail(std::string_view pred, std::string_view ref,
                              Database& db, const MatchConfig& cfg = {});
MatchOutcome exec_match(std::string_view pred, std::string_view ref,
                        Database& db, const MatchConfig& cfg = {});
MatchOutcome exec_match(std::string_view pred, std::string_view ref,
                        const DatabaseRef& db, const MatchConfig& cfg = {});

enum class VerifyMode { kGold, kDifferential };
std::string_view to_string(VerifyMode m);

// R_verify. GOLD: the correction matches the gold query. DIFFERENTIAL: the
// correction executes and behaves differently from the predicted query.
// When `mode` is empty, GOLD is used if gold is present, else DIFFERENTIAL.
// Throws Error(kInvalidArgument) for an empty correction or GOLD without gold.
int verify_correction(std::string_view pred, std::string_view corrected,
                      Database& db, const std::optional<std::string>& gold,
                      std::optional<VerifyMode> mode = std::nullopt,
                      const MatchConfig& cfg = {});

VerifyMode default_verify_mode(const std::optional<std::string>& gold);

// Creates (or replaces) a SQLite file at `path` and runs `script` on it with
// write access. Intended for building fixture databases.
void materialize_database(const std::filesystem::path& path, std::string_view script);

}  // namespace sqlcritic
