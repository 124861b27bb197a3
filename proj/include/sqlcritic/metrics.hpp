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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sqlcritic/types.hpp"

namespace sqlcritic {

struct ScoredPrediction {
  double score = 0.0;  // confidence that the predicted SQL is correct
  bool verdict = false;
  bool label = false;
  Hardness hardness = Hardness::kUnknown;
};

// Score source for a judge that emits binary verdicts: the fraction of True
// verdicts across repeated runs (a single run gives 0 or 1).
double score_from_verdicts(std::span<const bool> run_verdicts);

// Mann-Whitney AUC: fraction of (positive, negative) pairs ordered correctly,
// ties count one half. Throws Error(kDegenerateClasses) when a class is absent.
double auc(std::span<const ScoredPrediction> items);

// Throws Error(kEmptySet) for no items.
double accuracy(std::span<const ScoredPrediction> items);

struct F1Result {
  double value = 0.0;
  bool zero_division = false;  // precision or recall had a zero denominator
};

// "Correct SQL" is the positive class.
F1Result f1(std::span<const ScoredPrediction> items);

struct ConfusionCounts {
  long tp = 0, fp = 0, fn = 0, tn = 0;
};
ConfusionCounts confusion(std::span<const ScoredPrediction> items);

// "776 (47.20%)"
std::string format_count_percent(long count, long total);
// Two-decimal percentage of a [0, 1] ratio: 0.472 -> "47.20".
std::string format_percent(double ratio);

struct MetricRow {
  std::string group;  // hardness name or "overall"
  long count = 0;
  std::optional<double> auc;  // absent when one class is missing
  double accuracy = 0.0;
  F1Result f1;
};

struct MetricReport {
  std::vector<MetricRow> rows;  // present groups in hardness order, then overall

  // Tab-separated table with percentages at two decimals.
  std::string to_tsv() const;
  // JSON document with the same values (percent strings and raw ratios).
  std::string to_json() const;
};

// Groups by hardness; empty groups are omitted. An empty input yields an
// empty report.
MetricReport grouped_report(std::span<const ScoredPrediction> items);

}  // namespace sqlcritic
