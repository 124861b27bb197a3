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

#include <string>
#include <string_view>
#include <vector>

#include "sqlcritic/types.hpp"

namespace sqlcritic {

enum class TokenKind {
  kWord,              // keyword or bare identifier
  kQuotedIdentifier,  // "x", `x`, [x]
  kString,            // 'x'
  kNumber,
  kParameter,         // ?, :name, @name, $name
  kOperator,
  kLParen,
  kRParen,
  kComma,
  kSemicolon,
};

struct Token {
  TokenKind kind;
  std::string text;   // as written
  std::string upper;  // upper-cased for kWord, otherwise equal to text
  int depth = 0;      // parenthesis nesting depth at the token
};

// SQLite-dialect lexer. Throws Error(kParse) on unterminated strings,
// quoted identifiers or block comments, and on unbalanced parentheses.
std::vector<Token> tokenize(std::string_view sql);

// Tokenizes and additionally requires a single query statement starting with
// a read keyword (SELECT/WITH/VALUES). Throws Error(kParse) otherwise.
std::vector<Token> parse_query_tokens(std::string_view sql);

// True iff the outermost query carries an ORDER BY that reaches the final
// result. ORDER BY inside a subquery, CTE body or window spec does not count.
bool order_sensitive(std::string_view sql);

// True iff any statement-level token is a data or schema modifying verb.
// Returns false for text that does not tokenize.
bool contains_write_verb(std::string_view sql);

// Structural counts for the first SELECT core of the outermost query.
struct QueryComponents {
  int select_columns = 0;
  int aggregates = 0;
  int joins = 0;
  int where_predicates = 0;
  int or_connectives = 0;
  int like_predicates = 0;
  int group_by_columns = 0;
  bool has_where = false;
  bool has_group_by = false;
  bool has_order_by = false;
  bool has_limit = false;
  int set_operations = 0;  // UNION / INTERSECT / EXCEPT at top level
  int nested_queries = 0;  // subqueries and CTE bodies, at any depth

  // Clause-level components: WHERE, GROUP BY, ORDER BY, LIMIT, each join,
  // each OR and each LIKE.
  int clause_count() const;
  // Multiplicity components: >1 aggregate, >1 selected column, >1 WHERE
  // predicate, >1 GROUP BY column.
  int multiplicity_count() const;
  int advanced_classes() const;
};

QueryComponents count_components(std::string_view sql);

// Threshold table for classify_hardness. Let total = clause_count() +
// multiplicity_count() and adv = advanced_classes():
//   extra  if adv >= extra_adv_classes, or total >= extra_total,
//          or (adv >= 1 and total >= extra_total_with_adv)
//   hard   if adv >= 1 or total >= hard_total
//   easy   if no joins, clause_count() <= easy_max_clauses and
//          multiplicity_count() == 0
//   medium otherwise
struct HardnessThresholds {
  int extra_adv_classes = 2;
  int extra_total = 7;
  int extra_total_with_adv = 5;
  int hard_total = 4;
  int easy_max_clauses = 1;
};

Hardness classify_hardness(std::string_view sql,
                           const HardnessThresholds& thresholds = {});

// 1 - tree_edit_distance / max(tree sizes) over a normalized clause tree of
// each query. Identical normalized queries score 1. Throws Error(kParse).
double structural_similarity(std::string_view a, std::string_view b);

}  // namespace sqlcritic
