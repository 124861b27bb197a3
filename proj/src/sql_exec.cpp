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


#include "sqlcritic/sql_exec.hpp"

#include <sqlite3.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sqlcritic/error.hpp"
#include "sqlcritic/sql_analysis.hpp"

namespace sqlcritic {
namespace {

using Clock = std::chrono::steady_clock;

struct Deadline {
  Clock::time_point at;
};

int progress_callback(void* arg) {
  const auto* deadline = static_cast<const Deadline*>(arg);
  return Clock::now() >= deadline->at ? 1 : 0;
}

bool contains(std::string_view haystack, std::string_view needle) {
  return haystack.find(needle) != std::string_view::npos;
}

ExecErrorKind classify_prepare_error(int rc, std::string_view msg) {
  const int primary = rc & 0xff;
  if (primary == SQLITE_INTERRUPT) return ExecErrorKind::kTimeout;
  if (primary == SQLITE_NOMEM || primary == SQLITE_TOOBIG || primary == SQLITE_FULL ||
      primary == SQLITE_IOERR || primary == SQLITE_BUSY || primary == SQLITE_LOCKED) {
    return ExecErrorKind::kResource;
  }
  if (contains(msg, "syntax error") || contains(msg, "incomplete input") ||
      contains(msg, "unrecognized token") || contains(msg, "near \"")) {
    return ExecErrorKind::kSyntax;
  }
  return ExecErrorKind::kSchema;
}

ExecErrorKind classify_step_error(int rc) {
  const int primary = rc & 0xff;
  if (primary == SQLITE_INTERRUPT) return ExecErrorKind::kTimeout;
  if (primary == SQLITE_NOMEM || primary == SQLITE_TOOBIG || primary == SQLITE_FULL ||
      primary == SQLITE_IOERR || primary == SQLITE_BUSY || primary == SQLITE_LOCKED) {
    return ExecErrorKind::kResource;
  }
  return ExecErrorKind::kSchema;
}

struct StmtCloser {
  void operator()(sqlite3_stmt* s) const { sqlite3_finalize(s); }
};
using StmtPtr = std::unique_ptr<sqlite3_stmt, StmtCloser>;

Cell read_cell(sqlite3_stmt* stmt, int col) {
  switch (sqlite3_column_type(stmt, col)) {
    case SQLITE_INTEGER:
      return static_cast<std::int64_t>(sqlite3_column_int64(stmt, col));
    case SQLITE_FLOAT:
      return sqlite3_column_double(stmt, col);
    case SQLITE_TEXT: {
      const auto* p = reinterpret_cast<const char*>(sqlite3_column_text(stmt, col));
      return std::string(p, static_cast<size_t>(sqlite3_column_bytes(stmt, col)));
    }
    case SQLITE_BLOB: {
      const auto* p = static_cast<const std::uint8_t*>(sqlite3_column_blob(stmt, col));
      const int n = sqlite3_column_bytes(stmt, col);
      return Blob(p, p + n);
    }
    default:
      return Null{};
  }
}

bool only_trivia(std::string_view tail) {
  try {
    const auto toks = tokenize(tail);
    return std::all_of(toks.begin(), toks.end(),
                       [](const Token& t) { return t.kind == TokenKind::kSemicolon; });
  } catch (const Error&) {
    return false;
  }
}

int type_rank(const Cell& c) {
  switch (c.index()) {
    case 0: return 0;
    case 1:
    case 2: return 1;
    case 3: return 2;
    default: return 3;
  }
}

long double as_long_double(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<long double>(*i);
  return static_cast<long double>(std::get<double>(c));
}

// Total order consistent with exact (tol = 0) equality.
int compare_cells(const Cell& a, const Cell& b) {
  const int ra = type_rank(a);
  const int rb = type_rank(b);
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (ra) {
    case 0:
      return 0;
    case 1: {
      const long double x = as_long_double(a);
      const long double y = as_long_double(b);
      return x < y ? -1 : (y < x ? 1 : 0);
    }
    case 2: {
      const int c = std::get<std::string>(a).compare(std::get<std::string>(b));
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    default: {
      const Blob& x = std::get<Blob>(a);
      const Blob& y = std::get<Blob>(b);
      if (x < y) return -1;
      return y < x ? 1 : 0;
    }
  }
}

int compare_rows(const std::vector<Cell>& a, const std::vector<Cell>& b) {
  for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
    const int c = compare_cells(a[i], b[i]);
    if (c != 0) return c;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

bool rows_equal(const std::vector<Cell>& a, const std::vector<Cell>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (!cells_equal(a[i], b[i], tol)) return false;
  }
  return true;
}

std::vector<const std::vector<Cell>*> sorted_rows(const QueryResult& r) {
  std::vector<const std::vector<Cell>*> out;
  out.reserve(r.rows.size());
  for (const auto& row : r.rows) out.push_back(&row);
  std::sort(out.begin(), out.end(), [](const auto* x, const auto* y) {
    return compare_rows(*x, *y) < 0;
  });
  return out;
}

// Reorders columns by the sorted multiset of their values.
QueryResult canonical_column_order(const QueryResult& r) {
  std::vector<std::vector<Cell>> columns(r.columns);
  for (const auto& row : r.rows) {
    for (size_t c = 0; c < r.columns; ++c) columns[c].push_back(row[c]);
  }
  for (auto& col : columns) {
    std::sort(col.begin(), col.end(),
              [](const Cell& x, const Cell& y) { return compare_cells(x, y) < 0; });
  }
  std::vector<size_t> order(r.columns);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t x, size_t y) {
    return compare_rows(columns[x], columns[y]) < 0;
  });
  QueryResult out;
  out.columns = r.columns;
  out.truncated = r.truncated;
  for (const auto& row : r.rows) {
    std::vector<Cell> reordered;
    reordered.reserve(r.columns);
    for (size_t c : order) reordered.push_back(row[c]);
    out.rows.push_back(std::move(reordered));
  }
  return out;
}

constexpr size_t kGreedyMatchLimit = 4096;

}  // namespace

std::string_view to_string(ExecErrorKind kind) {
  switch (kind) {
    case ExecErrorKind::kSyntax: return "SYNTAX";
    case ExecErrorKind::kSchema: return "SCHEMA";
    case ExecErrorKind::kTimeout: return "TIMEOUT";
    case ExecErrorKind::kResource: return "RESOURCE";
  }
  return "UNKNOWN";
}

std::string_view to_string(MatchOutcome m) {
  switch (m) {
    case MatchOutcome::kEquiv: return "EQUIV";
    case MatchOutcome::kNotEquiv: return "NOT_EQUIV";
    case MatchOutcome::kPredError: return "PRED_ERROR";
    case MatchOutcome::kRefError: return "REF_ERROR";
  }
  return "UNKNOWN";
}

std::string_view to_string(VerifyMode m) {
  return m == VerifyMode::kGold ? "GOLD" : "DIFFERENTIAL";
}

Database::Database(const DatabaseRef& ref) : ref_(ref) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(ref.path, ec)) {
    throw Error(ErrorCode::kDbUnavailable,
                "database file not found: " + ref.path.string());
  }
  const int rc = sqlite3_open_v2(ref.path.c_str(), &handle_,
                                 SQLITE_OPEN_READONLY | SQLITE_OPEN_NOMUTEX, nullptr);
  if (rc != SQLITE_OK) {
    const std::string msg = handle_ ? sqlite3_errmsg(handle_) : "open failed";
    sqlite3_close(handle_);
    handle_ = nullptr;
    throw Error(ErrorCode::kDbUnavailable, "cannot open " + ref.path.string() + ": " + msg);
  }
  char* err = nullptr;
  if (sqlite3_exec(handle_, "PRAGMA query_only = ON; SELECT count(*) FROM sqlite_master;",
                   nullptr, nullptr, &err) != SQLITE_OK) {
    const std::string msg = err ? err : "unknown error";
    sqlite3_free(err);
    sqlite3_close(handle_);
    handle_ = nullptr;
    throw Error(ErrorCode::kDbUnavailable, "not a usable database " + ref.path.string() + ": " + msg);
  }
  sqlite3_busy_timeout(handle_, 5000);
}

Database::~Database() {
  if (handle_) sqlite3_close(handle_);
}

Database::Database(Database&& other) noexcept
    : ref_(std::move(other.ref_)), handle_(other.handle_) {
  other.handle_ = nullptr;
}

Database& Database::operator=(Database&& other) noexcept {
  if (this != &other) {
    if (handle_) sqlite3_close(handle_);
    ref_ = std::move(other.ref_);
    handle_ = other.handle_;
    other.handle_ = nullptr;
  }
  return *this;
}

ExecOutcome Database::execute(std::string_view sql, const ExecOptions& opts) {
  const auto start = Clock::now();
  auto fail = [&](ExecErrorKind kind, std::string message) -> ExecOutcome {
    return ExecError{kind, std::move(message),
                     std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start)};
  };
  if (contains_write_verb(sql)) {
    return fail(ExecErrorKind::kSchema, "write statements are not permitted");
  }

  Deadline deadline{start + opts.timeout};
  sqlite3_progress_handler(handle_, 1000, &progress_callback, &deadline);
  struct HandlerReset {
    sqlite3* h;
    ~HandlerReset() { sqlite3_progress_handler(h, 0, nullptr, nullptr); }
  } reset{handle_};

  sqlite3_stmt* raw = nullptr;
  const char* tail = nullptr;
  const int prc = sqlite3_prepare_v2(handle_, sql.data(), static_cast<int>(sql.size()), &raw, &tail);
  StmtPtr stmt(raw);
  if (prc != SQLITE_OK) {
    const std::string msg = sqlite3_errmsg(handle_);
    return fail(classify_prepare_error(sqlite3_extended_errcode(handle_), msg), msg);
  }
  if (!stmt) return fail(ExecErrorKind::kSyntax, "empty statement");
  if (tail && !only_trivia(std::string_view(tail, sql.data() + sql.size() - tail))) {
    return fail(ExecErrorKind::kSyntax, "multiple statements are not permitted");
  }
  if (!sqlite3_stmt_readonly(stmt.get())) {
    return fail(ExecErrorKind::kSchema, "write statements are not permitted");
  }

  QueryResult result;
  result.columns = static_cast<size_t>(sqlite3_column_count(stmt.get()));
  while (true) {
    const int rc = sqlite3_step(stmt.get());
    if (rc == SQLITE_DONE) break;
    if (rc == SQLITE_ROW) {
      if (result.rows.size() >= opts.row_cap) {
        result.truncated = true;
        break;
      }
      std::vector<Cell> row;
      row.reserve(result.columns);
      for (size_t c = 0; c < result.columns; ++c) {
        row.push_back(read_cell(stmt.get(), static_cast<int>(c)));
      }
      result.rows.push_back(std::move(row));
      continue;
    }
    const ExecErrorKind kind = classify_step_error(rc);
    if (kind == ExecErrorKind::kTimeout) {
      return fail(kind, "query exceeded " + std::to_string(opts.timeout.count()) + " ms");
    }
    return fail(kind, sqlite3_errmsg(handle_));
  }
  return result;
}

ConnectionPool::Lease::~Lease() {
  if (pool_ && db_) pool_->release(std::move(db_));
}

ConnectionPool::Lease ConnectionPool::acquire(const DatabaseRef& ref) {
  {
    std::lock_guard lock(mu_);
    auto it = idle_.find(ref.path);
    if (it != idle_.end() && !it->second.empty()) {
      auto db = std::move(it->second.back());
      it->second.pop_back();
      return Lease(this, std::move(db));
    }
  }
  return Lease(this, std::make_unique<Database>(ref));
}

void ConnectionPool::release(std::unique_ptr<Database> db) {
  std::lock_guard lock(mu_);
  auto& slot = idle_[db->ref().path];
  if (slot.size() < max_idle_per_db_) slot.push_back(std::move(db));
}

std::size_t ConnectionPool::idle_count() const {
  std::lock_guard lock(mu_);
  std::size_t n = 0;
  for (const auto& [_, v] : idle_) n += v.size();
  return n;
}

ExecOutcome execute(std::string_view sql, const DatabaseRef& db, const ExecOptions& opts) {
  Database conn(db);
  return conn.execute(sql, opts);
}

bool cells_equal(const Cell& a, const Cell& b, double float_tol) {
  const int ra = type_rank(a);
  if (ra != type_rank(b)) return false;
  switch (ra) {
    case 0:
      return true;
    case 1: {
      if (float_tol <= 0.0 || (a.index() == 1 && b.index() == 1)) {
        return compare_cells(a, b) == 0;
      }
      const double x = static_cast<double>(as_long_double(a));
      const double y = static_cast<double>(as_long_double(b));
      const double scale = std::max({1.0, std::fabs(x), std::fabs(y)});
      return std::fabs(x - y) <= float_tol * scale;
    }
    case 2:
      return std::get<std::string>(a) == std::get<std::string>(b);
    default:
      return std::get<Blob>(a) == std::get<Blob>(b);
  }
}

bool results_equivalent(const QueryResult& a, const QueryResult& b, bool order_sensitive,
                        double float_tol) {
  CompareOptions opts;
  opts.float_tol = float_tol;
  return results_equivalent(a, b, order_sensitive, opts);
}

bool results_equivalent(const QueryResult& a, const QueryResult& b, bool order_sensitive,
                        const CompareOptions& opts) {
  if (a.columns != b.columns) return false;
  if (a.rows.size() != b.rows.size()) return false;
  if (opts.ignore_column_order && a.columns > 1) {
    CompareOptions positional = opts;
    positional.ignore_column_order = false;
    return results_equivalent(canonical_column_order(a), canonical_column_order(b),
                              order_sensitive, positional);
  }
  const double tol = opts.float_tol;
  if (order_sensitive) {
    for (size_t i = 0; i < a.rows.size(); ++i) {
      if (!rows_equal(a.rows[i], b.rows[i], tol)) return false;
    }
    return true;
  }
  const auto sa = sorted_rows(a);
  const auto sb = sorted_rows(b);
  bool aligned = true;
  for (size_t i = 0; i < sa.size() && aligned; ++i) {
    aligned = rows_equal(*sa[i], *sb[i], tol);
  }
  if (aligned || tol <= 0.0 || sa.size() > kGreedyMatchLimit) return aligned;

  // Values within tolerance can sort differently; fall back to matching.
  std::vector<bool> used(sb.size(), false);
  for (const auto* row : sa) {
    bool found = false;
    for (size_t j = 0; j < sb.size(); ++j) {
      if (!used[j] && rows_equal(*row, *sb[j], tol)) {
        used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

MatchDetail exec_match_detail(std::string_view pred, std::string_view ref, Database& db,
                              const MatchConfig& cfg) {
  MatchDetail d;
  try {
    d.order_sensitive = order_sensitive(ref);
  } catch (const Error&) {
    d.order_sensitive = false;
  }
  ExecOutcome ref_out = db.execute(ref, cfg.exec);
  if (auto* e = std::get_if<ExecError>(&ref_out)) {
    d.outcome = MatchOutcome::kRefError;
    d.ref_error = *e;
    return d;
  }
  ExecOutcome pred_out = db.execute(pred, cfg.exec);
  if (auto* e = std::get_if<ExecError>(&pred_out)) {
    d.outcome = MatchOutcome::kPredError;
    d.pred_error = *e;
    return d;
  }
  d.outcome = results_equivalent(std::get<QueryResult>(pred_out), std::get<QueryResult>(ref_out),
                                 d.order_sensitive, cfg.compare)
                  ? MatchOutcome::kEquiv
                  : MatchOutcome::kNotEquiv;
  return d;
}

MatchOutcome exec_match(std::string_view pred, std::string_view ref, Database& db,
                        const MatchConfig& cfg) {
  return exec_match_detail(pred, ref, db, cfg).outcome;
}

MatchOutcome exec_match(std::string_view pred, std::string_view ref, const DatabaseRef& db,
                        const MatchConfig& cfg) {
  Database conn(db);
  return exec_match(pred, ref, conn, cfg);
}

VerifyMode default_verify_mode(const std::optional<std::string>& gold) {
  return gold && !gold->empty() ? VerifyMode::kGold : VerifyMode::kDifferential;
}

int verify_correction(std::string_view pred, std::string_view corrected, Database& db,
                      const std::optional<std::string>& gold, std::optional<VerifyMode> mode,
                      const MatchConfig& cfg) {
  if (corrected.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw Error(ErrorCode::kInvalidArgument, "corrected SQL is empty");
  }
  const VerifyMode m = mode.value_or(default_verify_mode(gold));
  if (m == VerifyMode::kGold) {
    if (!gold || gold->empty()) {
      throw Error(ErrorCode::kInvalidArgument, "GOLD verification requires a gold query");
    }
    return exec_match(corrected, *gold, db, cfg) == MatchOutcome::kEquiv ? 1 : 0;
  }
  if (corrected == pred) return 0;
  if (!is_ok(db.execute(corrected, cfg.exec))) return 0;
  return exec_match(corrected, pred, db, cfg) != MatchOutcome::kEquiv ? 1 : 0;
}

void materialize_database(const std::filesystem::path& path, std::string_view script) {
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  std::filesystem::remove(path, ec);
  sqlite3* h = nullptr;
  if (sqlite3_open_v2(path.c_str(), &h, SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE, nullptr) !=
      SQLITE_OK) {
    const std::string msg = h ? sqlite3_errmsg(h) : "open failed";
    sqlite3_close(h);
    throw Error(ErrorCode::kDbUnavailable, "cannot create " + path.string() + ": " + msg);
  }
  char* err = nullptr;
  const std::string owned(script);
  const int rc = sqlite3_exec(h, owned.c_str(), nullptr, nullptr, &err);
  const std::string msg = err ? err : "";
  sqlite3_free(err);
  sqlite3_close(h);
  if (rc != SQLITE_OK) {
    throw Error(ErrorCode::kInvalidArgument, "fixture script failed: " + msg);
  }
}

}  // namespace sqlcritic
