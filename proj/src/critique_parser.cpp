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


#include "sqlcritic/critique_parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

namespace sqlcritic {
namespace {

constexpr std::string_view kWhitespace = " \t\r\n\f\v";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(kWhitespace);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(kWhitespace);
  return s.substr(first, last - first + 1);
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

bool contains_any(std::string_view haystack,
                  std::initializer_list<std::string_view> needles) {
  return std::any_of(needles.begin(), needles.end(), [&](std::string_view n) {
    return haystack.find(n) != std::string_view::npos;
  });
}

struct Block {
  bool present = false;
  size_t open = 0;       // position of the opening tag
  size_t body_begin = 0;
  size_t body_end = 0;   // position of the closing tag
  size_t close_end = 0;
};

size_t count_occurrences(std::string_view text, std::string_view needle) {
  size_t n = 0;
  for (size_t pos = text.find(needle); pos != std::string_view::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

// First opening tag wins. Duplicate or stray tags only count as TAG_ORDER.
Block find_block(std::string_view text, std::string_view name,
                 bool& order_violation) {
  const std::string open = "<" + std::string(name) + ">";
  const std::string close = "</" + std::string(name) + ">";
  Block b;
  const size_t opens = count_occurrences(text, open);
  const size_t closes = count_occurrences(text, close);
  if (opens > 1 || closes > 1) order_violation = true;
  const size_t o = text.find(open);
  if (o == std::string_view::npos) {
    if (closes > 0) order_violation = true;
    return b;
  }
  const size_t first_close = text.find(close);
  if (first_close != std::string_view::npos && first_close < o) {
    order_violation = true;
  }
  const size_t c = text.find(close, o + open.size());
  if (c == std::string_view::npos) return b;
  b.present = true;
  b.open = o;
  b.body_begin = o + open.size();
  b.body_end = c;
  b.close_end = c + close.size();
  return b;
}

struct StepHeader {
  bool matched = false;
  long number = 0;
  std::string_view question;
};

// "<number>." or "<number>:" followed by whitespace or end of line.
StepHeader match_step_header(std::string_view line) {
  StepHeader h;
  const std::string_view t = trim(line);
  size_t i = 0;
  while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
  if (i == 0 || i > 6 || i >= t.size()) return h;
  if (t[i] != '.' && t[i] != ':') return h;
  if (i + 1 < t.size() && !std::isspace(static_cast<unsigned char>(t[i + 1]))) {
    return h;
  }
  h.matched = true;
  h.number = std::stol(std::string(t.substr(0, i)));
  h.question = trim(t.substr(i + 1));
  return h;
}

std::string_view strip_bullet(std::string_view line) {
  std::string_view t = trim(line);
  while (!t.empty() && (t.front() == '-' || t.front() == '*')) {
    t = trim(t.substr(1));
  }
  if (t.starts_with("\xE2\x80\xA2")) t = trim(t.substr(3));  // U+2022
  return t;
}

struct ParsedSteps {
  std::vector<RubricStep> steps;
  bool unparseable = false;
};

ParsedSteps parse_steps(std::string_view think) {
  ParsedSteps out;
  std::vector<std::string_view> lines;
  size_t start = 0;
  while (start <= think.size()) {
    size_t end = think.find('\n', start);
    if (end == std::string_view::npos) end = think.size();
    lines.push_back(think.substr(start, end - start));
    start = end + 1;
  }

  struct Pending {
    long number;
    std::string question;
    std::string answer;
  };
  std::optional<Pending> current;
  long headers_seen = 0;

  auto flush = [&] {
    if (!current) return;
    if (current->question.empty() || current->answer.empty()) {
      out.unparseable = true;
    } else {
      RubricStep step;
      step.index = static_cast<int>(out.steps.size()) + 1;
      step.question = std::move(current->question);
      step.answer = std::move(current->answer);
      step.flags_error = answer_flags_error(step.question, step.answer);
      out.steps.push_back(std::move(step));
    }
    current.reset();
  };

  for (std::string_view line : lines) {
    const StepHeader h = match_step_header(line);
    if (h.matched) {
      flush();
      ++headers_seen;
      if (h.number != headers_seen) out.unparseable = true;
      current = Pending{h.number, std::string(h.question), {}};
      continue;
    }
    if (!current) continue;  // preamble before the first numbered item
    const std::string_view body = strip_bullet(line);
    if (body.empty()) continue;
    if (!current->answer.empty()) current->answer += ' ';
    current->answer.append(body);
  }
  flush();
  return out;
}

std::string strip_code_fence(std::string_view sql) {
  std::string_view t = trim(sql);
  if (t.starts_with("```")) {
    const size_t nl = t.find('\n');
    t = nl == std::string_view::npos ? std::string_view{} : t.substr(nl + 1);
    if (t.ends_with("```")) t = t.substr(0, t.size() - 3);
    t = trim(t);
  }
  return std::string(t);
}

}  // namespace

std::string_view to_string(FormatViolation v) {
  switch (v) {
    case FormatViolation::kMissingThink: return "MISSING_THINK";
    case FormatViolation::kMissingResult: return "MISSING_RESULT";
    case FormatViolation::kBadVerdictToken: return "BAD_VERDICT_TOKEN";
    case FormatViolation::kTagOrder: return "TAG_ORDER";
    case FormatViolation::kEmptySteps: return "EMPTY_STEPS";
    case FormatViolation::kMissingCorrection: return "MISSING_CORRECTION";
    case FormatViolation::kUnparseableStep: return "UNPARSEABLE_STEP";
  }
  return "UNKNOWN";
}

bool FormatReport::has(FormatViolation v) const {
  return std::find(violations.begin(), violations.end(), v) != violations.end();
}

bool CritiqueResponse::flags_error() const {
  return std::any_of(steps.begin(), steps.end(),
                     [](const RubricStep& s) { return s.flags_error; });
}

bool answer_flags_error(std::string_view question, std::string_view answer) {
  const std::string q = lowercase(question);
  const std::string a = lowercase(trim(answer));

  // A question that asks whether a defect is present ("Did I include any
  // unnecessary columns?") inverts the meaning of a leading yes/no.
  const bool asks_about_defect =
      contains_any(q, {"unnecessary", "redundant", "superfluous", "extraneous",
                       "error", "mistake", "wrong", "incorrect", "missing",
                       "issue", "problem", "bug"}) &&
      !contains_any(q, {"without", "avoid", "free of"});

  size_t i = 0;
  while (i < a.size() && !std::isalpha(static_cast<unsigned char>(a[i]))) ++i;
  size_t j = i;
  while (j < a.size() && std::isalpha(static_cast<unsigned char>(a[j]))) ++j;
  const std::string_view lead = std::string_view(a).substr(i, j - i);

  const bool says_yes = lead == "yes";
  const bool says_no = lead == "no";
  const bool affirms = (says_yes && !asks_about_defect) ||
                       (says_no && asks_about_defect);
  const bool denies = (says_no && !asks_about_defect) ||
                      (says_yes && asks_about_defect);
  if (denies) return true;

  const bool contrast = contains_any(a, {" but ", "however"});
  if (affirms && !contrast) return false;

  return contains_any(
      a, {"does not", "doesn't", "do not", "don't", "did not", "didn't",
          "is not", "isn't", "are not", "aren't", "missing", "incorrect",
          "wrong", "should be", "should use", "should have", "needs to",
          "need to", "must be", "fails to", "failed to", "not specific",
          "not correct", "mistake", "lacks", "omits"});
}

CritiqueResponse parse_critique(std::string_view text) {
  CritiqueResponse resp;
  resp.raw = std::string(text);
  std::vector<FormatViolation> violations;
  bool order_violation = false;

  const Block think = find_block(text, "think", order_violation);
  const Block result = find_block(text, "result", order_violation);
  const Block corrected = find_block(text, "correctedSQL", order_violation);

  if (!think.present) violations.push_back(FormatViolation::kMissingThink);
  if (!result.present) violations.push_back(FormatViolation::kMissingResult);

  if (think.present && result.present && think.close_end > result.open) {
    order_violation = true;
  }
  if (corrected.present) {
    if ((result.present && result.close_end > corrected.open) ||
        (think.present && think.close_end > corrected.open)) {
      order_violation = true;
    }
  }

  if (think.present) {
    ParsedSteps parsed =
        parse_steps(text.substr(think.body_begin, think.body_end - think.body_begin));
    resp.steps = std::move(parsed.steps);
    if (parsed.unparseable) violations.push_back(FormatViolation::kUnparseableStep);
    if (resp.steps.empty()) violations.push_back(FormatViolation::kEmptySteps);
  }

  if (result.present) {
    const std::string token = lowercase(
        trim(text.substr(result.body_begin, result.body_end - result.body_begin)));
    if (token == "true") {
      resp.verdict = true;
    } else if (token == "false") {
      resp.verdict = false;
    } else {
      violations.push_back(FormatViolation::kBadVerdictToken);
    }
  }

  // A corrected block attached to a True verdict is ignored.
  if (resp.verdict == false) {
    std::string sql;
    if (corrected.present) {
      sql = strip_code_fence(text.substr(
          corrected.body_begin, corrected.body_end - corrected.body_begin));
    }
    if (sql.empty()) {
      violations.push_back(FormatViolation::kMissingCorrection);
    } else {
      resp.corrected_sql = std::move(sql);
    }
  }

  if (order_violation) violations.push_back(FormatViolation::kTagOrder);
  std::sort(violations.begin(), violations.end());
  violations.erase(std::unique(violations.begin(), violations.end()),
                   violations.end());
  resp.format.violations = std::move(violations);
  resp.format.valid = resp.format.violations.empty();
  return resp;
}

int check_format(const CritiqueResponse& resp) { return resp.format.valid ? 1 : 0; }

std::string to_tagged_text(const CritiqueResponse& resp) {
  std::ostringstream out;
  out << "<think>\n";
  for (const RubricStep& step : resp.steps) {
    out << step.index << ". " << step.question << "\n- " << step.answer << "\n";
  }
  out << "</think>\n";
  if (resp.verdict) {
    out << "<result> " << (*resp.verdict ? "True" : "False") << " </result>\n";
  }
  if (resp.verdict == false && resp.corrected_sql) {
    out << "<correctedSQL>\n" << *resp.corrected_sql << "\n</correctedSQL>\n";
  }
  return out.str();
}

}  // namespace sqlcritic
