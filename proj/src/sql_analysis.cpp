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


#include "sqlcritic/sql_analysis.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <set>
#include <unordered_set>

#include "sqlcritic/error.hpp"

namespace sqlcritic {
namespace {

bool is_word_start(unsigned char c) {
  return std::isalpha(c) || c == '_' || c >= 0x80;
}

bool is_word_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '$' || c >= 0x80;
}

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return out;
}

[[noreturn]] void parse_error(const std::string& what, size_t pos) {
  throw Error(ErrorCode::kParse, what + " at offset " + std::to_string(pos));
}

size_t scan_quoted(std::string_view sql, size_t pos, char close) {
  // Doubled closing quote is an escape.
  size_t i = pos + 1;
  while (i < sql.size()) {
    if (sql[i] == close) {
      if (close != ']' && i + 1 < sql.size() && sql[i + 1] == close) {
        i += 2;
        continue;
      }
      return i + 1;
    }
    ++i;
  }
  parse_error("unterminated quoted token", pos);
}

bool is_query_start(const Token& t) {
  return t.kind == TokenKind::kWord &&
         (t.upper == "SELECT" || t.upper == "WITH" || t.upper == "VALUES");
}

bool is_set_op(const Token& t) {
  return t.kind == TokenKind::kWord &&
         (t.upper == "UNION" || t.upper == "INTERSECT" || t.upper == "EXCEPT");
}

bool word_is(const Token& t, std::string_view w) {
  return t.kind == TokenKind::kWord && t.upper == w;
}

bool is_subquery_open(const std::vector<Token>& toks, size_t i) {
  return toks[i].kind == TokenKind::kLParen && i + 1 < toks.size() &&
         is_query_start(toks[i + 1]);
}

size_t matching_paren(const std::vector<Token>& toks, size_t open) {
  const int depth = toks[open].depth;
  for (size_t i = open + 1; i < toks.size(); ++i) {
    if (toks[i].kind == TokenKind::kRParen && toks[i].depth == depth) return i;
  }
  return toks.size() - 1;
}

enum class Clause { kNone, kSelect, kFrom, kWhere, kGroupBy, kHaving, kOrderBy, kLimit, kOther };

// Clause keyword starting at toks[i] (at the core's base depth), if any.
// Sets `width` to the number of tokens the keyword spans.
Clause clause_at(const std::vector<Token>& toks, size_t i, size_t& width) {
  width = 1;
  const Token& t = toks[i];
  if (t.kind != TokenKind::kWord) return Clause::kNone;
  auto followed_by_by = [&] {
    return i + 1 < toks.size() && word_is(toks[i + 1], "BY");
  };
  if (t.upper == "SELECT") return Clause::kSelect;
  if (t.upper == "FROM") return Clause::kFrom;
  if (t.upper == "WHERE") return Clause::kWhere;
  if (t.upper == "HAVING") return Clause::kHaving;
  if (t.upper == "LIMIT") return Clause::kLimit;
  if (t.upper == "WINDOW") return Clause::kOther;
  if (t.upper == "GROUP" && followed_by_by()) {
    width = 2;
    return Clause::kGroupBy;
  }
  if (t.upper == "ORDER" && followed_by_by()) {
    width = 2;
    return Clause::kOrderBy;
  }
  return Clause::kNone;
}

const std::unordered_set<std::string>& aggregate_names() {
  static const std::unordered_set<std::string> names = {
      "COUNT", "SUM", "AVG", "MIN", "MAX", "TOTAL", "GROUP_CONCAT"};
  return names;
}

}  // namespace

std::vector<Token> tokenize(std::string_view sql) {
  std::vector<Token> out;
  int depth = 0;
  size_t i = 0;
  auto push = [&](TokenKind kind, size_t begin, size_t end, int d) {
    Token t{kind, std::string(sql.substr(begin, end - begin)), {}, d};
    t.upper = kind == TokenKind::kWord ? upper(t.text) : t.text;
    out.push_back(std::move(t));
  };
  while (i < sql.size()) {
    const unsigned char c = static_cast<unsigned char>(sql[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (c == '-' && i + 1 < sql.size() && sql[i + 1] == '-') {
      const size_t nl = sql.find('\n', i);
      i = nl == std::string_view::npos ? sql.size() : nl + 1;
      continue;
    }
    if (c == '/' && i + 1 < sql.size() && sql[i + 1] == '*') {
      const size_t end = sql.find("*/", i + 2);
      if (end == std::string_view::npos) parse_error("unterminated comment", i);
      i = end + 2;
      continue;
    }
    if (c == '\'') {
      const size_t end = scan_quoted(sql, i, '\'');
      push(TokenKind::kString, i, end, depth);
      i = end;
      continue;
    }
    if (c == '"' || c == '`' || c == '[') {
      const char close = c == '[' ? ']' : static_cast<char>(c);
      const size_t end = scan_quoted(sql, i, close);
      push(TokenKind::kQuotedIdentifier, i, end, depth);
      i = end;
      continue;
    }
    if (std::isdigit(c) ||
        (c == '.' && i + 1 < sql.size() &&
         std::isdigit(static_cast<unsigned char>(sql[i + 1])))) {
      size_t j = i;
      if (c == '0' && j + 1 < sql.size() && (sql[j + 1] == 'x' || sql[j + 1] == 'X')) {
        j += 2;
        while (j < sql.size() && std::isxdigit(static_cast<unsigned char>(sql[j]))) ++j;
      } else {
        while (j < sql.size() &&
               (std::isdigit(static_cast<unsigned char>(sql[j])) || sql[j] == '.')) {
          ++j;
        }
        if (j < sql.size() && (sql[j] == 'e' || sql[j] == 'E')) {
          size_t k = j + 1;
          if (k < sql.size() && (sql[k] == '+' || sql[k] == '-')) ++k;
          if (k < sql.size() && std::isdigit(static_cast<unsigned char>(sql[k]))) {
            j = k;
            while (j < sql.size() && std::isdigit(static_cast<unsigned char>(sql[j]))) ++j;
          }
        }
      }
      push(TokenKind::kNumber, i, j, depth);
      i = j;
      continue;
    }
    if (is_word_start(c)) {
      size_t j = i + 1;
      while (j < sql.size() && is_word_char(static_cast<unsigned char>(sql[j]))) ++j;
      push(TokenKind::kWord, i, j, depth);
      i = j;
      continue;
    }
    if (c == '?' || c == ':' || c == '@' || c == '$') {
      size_t j = i + 1;
      while (j < sql.size() && is_word_char(static_cast<unsigned char>(sql[j]))) ++j;
      if (j == i + 1 && c != '?') parse_error("unexpected character", i);
      push(TokenKind::kParameter, i, j, depth);
      i = j;
      continue;
    }
    if (c == '(') {
      push(TokenKind::kLParen, i, i + 1, depth);
      ++depth;
      ++i;
      continue;
    }
    if (c == ')') {
      if (--depth < 0) parse_error("unbalanced ')'", i);
      push(TokenKind::kRParen, i, i + 1, depth);
      ++i;
      continue;
    }
    if (c == ',') {
      push(TokenKind::kComma, i, i + 1, depth);
      ++i;
      continue;
    }
    if (c == ';') {
      push(TokenKind::kSemicolon, i, i + 1, depth);
      ++i;
      continue;
    }
    static constexpr std::string_view kLongOps[] = {"->>", "||", "<=", ">=", "<>", "!=",
                                                    "==", "<<", ">>", "->"};
    bool matched = false;
    for (std::string_view op : kLongOps) {
      if (sql.substr(i, op.size()) == op) {
        push(TokenKind::kOperator, i, i + op.size(), depth);
        i += op.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view("+-*/%=<>&|~.").find(static_cast<char>(c)) !=
        std::string_view::npos) {
      push(TokenKind::kOperator, i, i + 1, depth);
      ++i;
      continue;
    }
    parse_error("unexpected character", i);
  }
  if (depth != 0) parse_error("unbalanced '('", sql.size());
  return out;
}

std::vector<Token> parse_query_tokens(std::string_view sql) {
  std::vector<Token> toks = tokenize(sql);
  while (!toks.empty() && toks.back().kind == TokenKind::kSemicolon) toks.pop_back();
  if (toks.empty()) throw Error(ErrorCode::kParse, "empty query");
  for (const Token& t : toks) {
    if (t.kind == TokenKind::kSemicolon) {
      throw Error(ErrorCode::kParse, "multiple statements");
    }
  }
  size_t first = 0;
  while (first < toks.size() && toks[first].kind == TokenKind::kLParen) ++first;
  if (first >= toks.size() || !is_query_start(toks[first])) {
    throw Error(ErrorCode::kParse, "not a query: expected SELECT, WITH or VALUES");
  }
  return toks;
}

bool order_sensitive(std::string_view sql) {
  const std::vector<Token> toks = parse_query_tokens(sql);
  // A fully parenthesized query is its own outermost query.
  int base = 0;
  while (static_cast<size_t>(base) < toks.size() && toks[base].kind == TokenKind::kLParen &&
         matching_paren(toks, base) == toks.size() - 1 - base) {
    ++base;
  }
  for (size_t i = 0; i + 1 < toks.size(); ++i) {
    if (toks[i].depth == base && word_is(toks[i], "ORDER") && word_is(toks[i + 1], "BY")) {
      return true;
    }
  }
  return false;
}

bool contains_write_verb(std::string_view sql) {
  static const std::unordered_set<std::string> verbs = {
      "INSERT", "UPDATE", "DELETE", "CREATE", "DROP",  "ALTER",
      "ATTACH", "DETACH", "VACUUM", "REINDEX", "PRAGMA"};
  std::vector<Token> toks;
  try {
    toks = tokenize(sql);
  } catch (const Error&) {
    return false;
  }
  for (size_t i = 0; i < toks.size(); ++i) {
    const Token& t = toks[i];
    if (t.kind != TokenKind::kWord) continue;
    if (verbs.count(t.upper)) return true;
    // REPLACE is also a scalar function.
    if (t.upper == "REPLACE" &&
        !(i + 1 < toks.size() && toks[i + 1].kind == TokenKind::kLParen)) {
      return true;
    }
  }
  return false;
}

int QueryComponents::clause_count() const {
  return (has_where ? 1 : 0) + (has_group_by ? 1 : 0) + (has_order_by ? 1 : 0) +
         (has_limit ? 1 : 0) + joins + or_connectives + like_predicates;
}

int QueryComponents::multiplicity_count() const {
  return (aggregates > 1 ? 1 : 0) + (select_columns > 1 ? 1 : 0) +
         (where_predicates > 1 ? 1 : 0) + (group_by_columns > 1 ? 1 : 0);
}

int QueryComponents::advanced_classes() const {
  return (set_operations > 0 ? 1 : 0) + (nested_queries > 0 ? 1 : 0);
}

QueryComponents count_components(std::string_view sql) {
  const std::vector<Token> toks = parse_query_tokens(sql);
  QueryComponents qc;

  for (size_t i = 0; i < toks.size(); ++i) {
    if (is_subquery_open(toks, i)) ++qc.nested_queries;
  }

  // Outermost level: strip wrapping parentheses.
  size_t lo = 0;
  size_t hi = toks.size();
  while (lo < hi && toks[lo].kind == TokenKind::kLParen && matching_paren(toks, lo) == hi - 1) {
    ++lo;
    --hi;
  }
  // The wrapper parentheses are not subqueries in their own right.
  qc.nested_queries -= static_cast<int>(lo);
  const int base = lo < toks.size() ? toks[lo].depth : 0;

  for (size_t i = lo; i < hi; ++i) {
    if (toks[i].depth != base) continue;
    if (is_set_op(toks[i])) ++qc.set_operations;
    size_t w = 0;
    const Clause c = clause_at(toks, i, w);
    if (c == Clause::kOrderBy) qc.has_order_by = true;
    if (c == Clause::kLimit) qc.has_limit = true;
  }

  // First SELECT core, skipping a leading WITH clause.
  size_t core_begin = lo;
  while (core_begin < hi && !(toks[core_begin].depth == base && word_is(toks[core_begin], "SELECT"))) {
    ++core_begin;
  }
  size_t core_end = core_begin;
  while (core_end < hi && !(toks[core_end].depth == base && is_set_op(toks[core_end]))) {
    ++core_end;
  }

  Clause clause = Clause::kNone;
  bool pending_between = false;
  for (size_t i = core_begin; i < core_end; ++i) {
    if (is_subquery_open(toks, i)) {
      i = matching_paren(toks, i);
      continue;
    }
    const Token& t = toks[i];
    if (t.kind == TokenKind::kWord && aggregate_names().count(t.upper) &&
        i + 1 < core_end && toks[i + 1].kind == TokenKind::kLParen) {
      ++qc.aggregates;
    }
    if (word_is(t, "LIKE")) ++qc.like_predicates;
    if (t.depth != base) continue;

    size_t width = 0;
    const Clause next = clause_at(toks, i, width);
    if (next != Clause::kNone) {
      clause = next;
      if (clause == Clause::kSelect) qc.select_columns = 1;
      if (clause == Clause::kWhere) {
        qc.has_where = true;
        qc.where_predicates = 1;
      }
      if (clause == Clause::kGroupBy) {
        qc.has_group_by = true;
        qc.group_by_columns = 1;
      }
      i += width - 1;
      continue;
    }

    switch (clause) {
      case Clause::kSelect:
        if (t.kind == TokenKind::kComma) ++qc.select_columns;
        break;
      case Clause::kFrom:
        if (word_is(t, "JOIN") || t.kind == TokenKind::kComma) {
          ++qc.joins;
        }
        if (word_is(t, "OR")) ++qc.or_connectives;
        break;
      case Clause::kWhere:
        if (word_is(t, "BETWEEN")) pending_between = true;
        if (word_is(t, "AND")) {
          if (pending_between) {
            pending_between = false;
          } else {
            ++qc.where_predicates;
          }
        }
        if (word_is(t, "OR")) {
          ++qc.where_predicates;
          ++qc.or_connectives;
        }
        break;
      case Clause::kHaving:
        if (word_is(t, "OR")) ++qc.or_connectives;
        break;
      case Clause::kGroupBy:
        if (t.kind == TokenKind::kComma) ++qc.group_by_columns;
        break;
      default:
        break;
    }
  }
  return qc;
}

Hardness classify_hardness(std::string_view sql, const HardnessThresholds& th) {
  const QueryComponents qc = count_components(sql);
  const int adv = qc.advanced_classes();
  const int clauses = qc.clause_count();
  const int total = clauses + qc.multiplicity_count();
  if (adv >= th.extra_adv_classes || total >= th.extra_total ||
      (adv >= 1 && total >= th.extra_total_with_adv)) {
    return Hardness::kExtra;
  }
  if (adv >= 1 || total >= th.hard_total) return Hardness::kHard;
  if (qc.joins == 0 && clauses <= th.easy_max_clauses && qc.multiplicity_count() == 0) {
    return Hardness::kEasy;
  }
  return Hardness::kMedium;
}

namespace {

struct TreeNode {
  std::string label;
  std::vector<std::unique_ptr<TreeNode>> children;
};

std::string normalized_label(const Token& t) {
  switch (t.kind) {
    case TokenKind::kQuotedIdentifier:
      return upper(std::string_view(t.text).substr(1, t.text.size() - 2));
    case TokenKind::kWord:
      return t.upper;
    default:
      return t.text;
  }
}

bool is_tree_clause_keyword(const std::vector<Token>& toks, size_t i) {
  static const std::unordered_set<std::string> kw = {
      "SELECT", "FROM", "WHERE", "GROUP", "HAVING", "ORDER", "LIMIT", "JOIN",
      "ON",     "WITH", "UNION", "INTERSECT", "EXCEPT", "VALUES"};
  return toks[i].kind == TokenKind::kWord && kw.count(toks[i].upper) > 0;
}

// Builds the children of `parent` from toks[begin, end) at one depth level.
void build_level(const std::vector<Token>& toks, size_t begin, size_t end,
                 TreeNode& parent) {
  TreeNode* clause = nullptr;
  for (size_t i = begin; i < end; ++i) {
    const Token& t = toks[i];
    if (t.kind == TokenKind::kLParen) {
      const size_t close = matching_paren(toks, i);
      auto group = std::make_unique<TreeNode>();
      group->label = "()";
      build_level(toks, i + 1, close, *group);
      (clause ? *clause : parent).children.push_back(std::move(group));
      i = close;
      continue;
    }
    if (t.kind == TokenKind::kComma) continue;
    if (is_tree_clause_keyword(toks, i)) {
      auto node = std::make_unique<TreeNode>();
      node->label = t.upper;
      clause = node.get();
      parent.children.push_back(std::move(node));
      continue;
    }
    auto leaf = std::make_unique<TreeNode>();
    leaf->label = normalized_label(t);
    (clause ? *clause : parent).children.push_back(std::move(leaf));
  }
}

struct PostorderTree {
  std::vector<std::string> labels;  // 1-based
  std::vector<int> leftmost;        // 1-based
  std::vector<int> keyroots;
};

int flatten(const TreeNode& node, PostorderTree& out) {
  int leftmost = -1;
  for (const auto& child : node.children) {
    const int child_left = flatten(*child, out);
    if (leftmost < 0) leftmost = child_left;
  }
  out.labels.push_back(node.label);
  const int id = static_cast<int>(out.labels.size()) - 1;
  out.leftmost.push_back(leftmost < 0 ? id : leftmost);
  return out.leftmost.back();
}

PostorderTree postorder(const TreeNode& root) {
  PostorderTree t;
  t.labels.push_back({});
  t.leftmost.push_back(0);
  flatten(root, t);
  const int n = static_cast<int>(t.labels.size()) - 1;
  std::set<int> seen;
  for (int i = n; i >= 1; --i) {
    if (seen.insert(t.leftmost[i]).second) t.keyroots.push_back(i);
  }
  std::sort(t.keyroots.begin(), t.keyroots.end());
  return t;
}

// Zhang-Shasha ordered tree edit distance with unit costs.
int tree_edit_distance(const PostorderTree& a, const PostorderTree& b) {
  const int n = static_cast<int>(a.labels.size()) - 1;
  const int m = static_cast<int>(b.labels.size()) - 1;
  std::vector<std::vector<int>> td(n + 1, std::vector<int>(m + 1, 0));
  for (int i : a.keyroots) {
    for (int j : b.keyroots) {
      const int li = a.leftmost[i];
      const int lj = b.leftmost[j];
      // Row r of the forest table stands for nodes li..li+r-1.
      const int rows = i - li + 2;
      const int cols = j - lj + 2;
      std::vector<std::vector<int>> f(rows, std::vector<int>(cols, 0));
      for (int r = 1; r < rows; ++r) f[r][0] = f[r - 1][0] + 1;
      for (int c = 1; c < cols; ++c) f[0][c] = f[0][c - 1] + 1;
      for (int r = 1; r < rows; ++r) {
        const int x = li + r - 1;
        for (int c = 1; c < cols; ++c) {
          const int y = lj + c - 1;
          const int del = f[r - 1][c] + 1;
          const int ins = f[r][c - 1] + 1;
          if (a.leftmost[x] == li && b.leftmost[y] == lj) {
            const int sub = f[r - 1][c - 1] + (a.labels[x] == b.labels[y] ? 0 : 1);
            f[r][c] = std::min({del, ins, sub});
            td[x][y] = f[r][c];
          } else {
            const int pr = a.leftmost[x] - li;
            const int pc = b.leftmost[y] - lj;
            f[r][c] = std::min({del, ins, f[pr][pc] + td[x][y]});
          }
        }
      }
    }
  }
  return td[n][m];
}

PostorderTree query_tree(std::string_view sql) {
  std::vector<Token> toks = parse_query_tokens(sql);
  while (!toks.empty() && toks.back().kind == TokenKind::kSemicolon) toks.pop_back();
  TreeNode root;
  root.label = "QUERY";
  build_level(toks, 0, toks.size(), root);
  return postorder(root);
}

}  // namespace

double structural_similarity(std::string_view a, std::string_view b) {
  const PostorderTree ta = query_tree(a);
  const PostorderTree tb = query_tree(b);
  const int size = static_cast<int>(std::max(ta.labels.size(), tb.labels.size())) - 1;
  const int dist = tree_edit_distance(ta, tb);
  return 1.0 - static_cast<double>(dist) / static_cast<double>(size);
}

}  // namespace sqlcritic
