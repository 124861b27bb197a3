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


#include "sqlcritic/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include <json.hpp>

#include "sqlcritic/error.hpp"

namespace sqlcritic {

double score_from_verdicts(std::span<const bool> run_verdicts) {
  if (run_verdicts.empty()) throw Error(ErrorCode::kEmptySet, "no verdicts to score");
  const auto yes = std::count(run_verdicts.begin(), run_verdicts.end(), true);
  return static_cast<double>(yes) / static_cast<double>(run_verdicts.size());
}

double auc(std::span<const ScoredPrediction> items) {
  std::vector<std::pair<double, bool>> scored;
  scored.reserve(items.size());
  long long positives = 0;
  for (const auto& it : items) {
    scored.emplace_back(it.score, it.label);
    if (it.label) ++positives;
  }
  const long long negatives = static_cast<long long>(items.size()) - positives;
  if (positives == 0 || negatives == 0) {
    throw Error(ErrorCode::kDegenerateClasses, "AUC needs both positive and negative labels");
  }
  std::sort(scored.begin(), scored.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  // Twice the Mann-Whitney U statistic, kept integral.
  long double twice_u = 0;
  long long neg_below = 0;
  for (size_t i = 0; i < scored.size();) {
    size_t j = i;
    long long pos_tied = 0;
    long long neg_tied = 0;
    while (j < scored.size() && scored[j].first == scored[i].first) {
      (scored[j].second ? pos_tied : neg_tied) += 1;
      ++j;
    }
    twice_u += static_cast<long double>(pos_tied) * (2 * neg_below + neg_tied);
    neg_below += neg_tied;
    i = j;
  }
  return static_cast<double>(twice_u / (2.0L * positives * negatives));
}

double accuracy(std::span<const ScoredPrediction> items) {
  if (items.empty()) throw Error(ErrorCode::kEmptySet, "accuracy of an empty set");
  const auto hits = std::count_if(items.begin(), items.end(),
                                  [](const ScoredPrediction& p) { return p.verdict == p.label; });
  return static_cast<double>(hits) / static_cast<double>(items.size());
}

ConfusionCounts confusion(std::span<const ScoredPrediction> items) {
  ConfusionCounts c;
  for (const auto& p : items) {
    if (p.verdict && p.label) ++c.tp;
    else if (p.verdict && !p.label) ++c.fp;
    else if (!p.verdict && p.label) ++c.fn;
    else ++c.tn;
  }
  return c;
}

F1Result f1(std::span<const ScoredPrediction> items) {
  if (items.empty()) throw Error(ErrorCode::kEmptySet, "F1 of an empty set");
  const ConfusionCounts c = confusion(items);
  F1Result r;
  r.zero_division = (c.tp + c.fp == 0) || (c.tp + c.fn == 0);
  const long denom = 2 * c.tp + c.fp + c.fn;
  r.value = denom == 0 ? 0.0 : static_cast<double>(2 * c.tp) / static_cast<double>(denom);
  return r;
}

std::string format_percent(double ratio) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", ratio * 100.0);
  return buf;
}

std::string format_count_percent(long count, long total) {
  const double ratio = total == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(total);
  return std::to_string(count) + " (" + format_percent(ratio) + "%)";
}

namespace {

MetricRow make_row(std::string group, std::span<const ScoredPrediction> items) {
  MetricRow row;
  row.group = std::move(group);
  row.count = static_cast<long>(items.size());
  row.accuracy = accuracy(items);
  row.f1 = f1(items);
  try {
    row.auc = auc(items);
  } catch (const Error&) {
    row.auc.reset();
  }
  return row;
}

}  // namespace

MetricReport grouped_report(std::span<const ScoredPrediction> items) {
  MetricReport report;
  if (items.empty()) return report;
  std::map<Hardness, std::vector<ScoredPrediction>> groups;
  for (const auto& p : items) groups[p.hardness].push_back(p);
  for (const auto& [h, members] : groups) {
    report.rows.push_back(make_row(std::string(to_string(h)), members));
  }
  report.rows.push_back(make_row("overall", items));
  return report;
}

std::string MetricReport::to_tsv() const {
  std::ostringstream out;
  out << "group\tcount\tauc\taccuracy\tf1\n";
  for (const auto& r : rows) {
    out << r.group << '\t' << r.count << '\t' << (r.auc ? format_percent(*r.auc) : "-") << '\t'
        << format_percent(r.accuracy) << '\t' << format_percent(r.f1.value)
        << (r.f1.zero_division ? "*" : "") << '\n';
  }
  return out.str();
}

std::string MetricReport::to_json() const {
  nlohmann::json doc;
  doc["rows"] = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row;
    row["group"] = r.group;
    row["count"] = r.count;
    row["auc"] = r.auc ? nlohmann::json(*r.auc) : nlohmann::json(nullptr);
    row["auc_percent"] = r.auc ? nlohmann::json(format_percent(*r.auc)) : nlohmann::json(nullptr);
    row["accuracy"] = r.accuracy;
    row["accuracy_percent"] = format_percent(r.accuracy);
    row["f1"] = r.f1.value;
    row["f1_percent"] = format_percent(r.f1.value);
    row["f1_zero_division"] = r.f1.zero_division;
    doc["rows"].push_back(std::move(row));
  }
  return doc.dump(2);
}

}  // namespace sqlcritic
