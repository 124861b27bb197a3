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

namespace sqlcritic {

struct GrpoConfig {
  double clip_eps = 0.2;
  double kl_beta = 0.001;
  bool normalize_std = true;
  double std_floor = 1e-8;

  void validate() const;  // throws Error(kConfig)
};

// G critique responses for one prompt. Log-probabilities are sequence-level
// sums; see token_mean() for per-token aggregation.
struct RolloutGroup {
  std::string prompt_id;
  std::vector<double> rewards;
  std::optional<std::vector<double>> logp_new;
  std::optional<std::vector<double>> logp_old;
  std::optional<std::vector<double>> logp_ref;
  std::optional<std::vector<double>> advantages;

  void validate() const;  // throws Error(kInvalidArgument) on ragged lists
};

// A_i = r_i - mean(r), divided by max(population std, std_floor) when
// normalize_std is set. Throws Error(kEmptyGroup) for an empty group.
std::vector<double> group_advantages(std::span<const double> rewards,
                                     const GrpoConfig& cfg = {});

// min(ratio * A, clip(ratio, 1 - eps, 1 + eps) * A).
double clipped_surrogate(double ratio, double advantage, double clip_eps);

// exp(d) - d - 1 with d = logp_ref - logp_new: non-negative, zero iff equal.
double kl_term(double logp_new, double logp_ref);

// Mean per-token log-probability from a summed sequence value.
double token_mean(double logp_sum, std::size_t token_count);

// Per-group objective: (1/G) * sum_i [surrogate_i - beta * kl_i], with
// ratio_i = exp(logp_new_i - logp_old_i). Advantages are computed from the
// rewards when the group does not carry them. Requires logp_new and logp_old;
// the KL term is skipped when logp_ref is absent.
double grpo_objective(const RolloutGroup& group, const GrpoConfig& cfg = {});

}  // namespace sqlcritic
