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


#include "sqlcritic/grpo_math.hpp"

#include <algorithm>
#include <cmath>

#include "sqlcritic/error.hpp"

namespace sqlcritic {

void GrpoConfig::validate() const {
  if (!(clip_eps > 0.0 && clip_eps < 1.0)) {
    throw Error(ErrorCode::kConfig, "clip_eps must lie in (0, 1)");
  }
  if (!(kl_beta >= 0.0)) throw Error(ErrorCode::kConfig, "kl_beta must be >= 0");
  if (!(std_floor > 0.0)) throw Error(ErrorCode::kConfig, "std_floor must be > 0");
}

void RolloutGroup::validate() const {
  const size_t g = rewards.size();
  if (g == 0) throw Error(ErrorCode::kEmptyGroup, "rollout group is empty");
  for (const auto* list : {&logp_new, &logp_old, &logp_ref, &advantages}) {
    if (*list && (*list)->size() != g) {
      throw Error(ErrorCode::kInvalidArgument, "rollout group lists differ in length");
    }
  }
}

std::vector<double> group_advantages(std::span<const double> rewards, const GrpoConfig& cfg) {
  if (rewards.empty()) throw Error(ErrorCode::kEmptyGroup, "cannot normalize an empty group");
  const double g = static_cast<double>(rewards.size());
  double sum = 0.0;
  for (double r : rewards) sum += r;
  double mean = sum / g;
  // Second pass removes the rounding error of the first mean.
  double residual = 0.0;
  for (double r : rewards) residual += r - mean;
  mean += residual / g;

  std::vector<double> out(rewards.size());
  double sq = 0.0;
  for (size_t i = 0; i < rewards.size(); ++i) {
    out[i] = rewards[i] - mean;
    sq += out[i] * out[i];
  }
  if (std::all_of(rewards.begin(), rewards.end(),
                  [&](double r) { return r == rewards.front(); })) {
    std::fill(out.begin(), out.end(), 0.0);
    return out;
  }
  if (cfg.normalize_std) {
    const double denom = std::max(std::sqrt(sq / g), cfg.std_floor);
    for (double& a : out) a /= denom;
  }
  return out;
}

double clipped_surrogate(double ratio, double advantage, double clip_eps) {
  if (!(ratio > 0.0)) throw Error(ErrorCode::kInvalidArgument, "ratio must be > 0");
  const double clipped = std::clamp(ratio, 1.0 - clip_eps, 1.0 + clip_eps);
  return std::min(ratio * advantage, clipped * advantage);
}

double kl_term(double logp_new, double logp_ref) {
  const double d = logp_ref - logp_new;
  // expm1 keeps precision near zero.
  return std::expm1(d) - d;
}

double token_mean(double logp_sum, std::size_t token_count) {
  if (token_count == 0) throw Error(ErrorCode::kInvalidArgument, "token_count must be > 0");
  return logp_sum / static_cast<double>(token_count);
}

double grpo_objective(const RolloutGroup& group, const GrpoConfig& cfg) {
  group.validate();
  cfg.validate();
  if (!group.logp_new || !group.logp_old) {
    throw Error(ErrorCode::kInvalidArgument, "objective needs logp_new and logp_old");
  }
  const std::vector<double> adv =
      group.advantages ? *group.advantages : group_advantages(group.rewards, cfg);
  double total = 0.0;
  for (size_t i = 0; i < group.rewards.size(); ++i) {
    const double ratio = std::exp((*group.logp_new)[i] - (*group.logp_old)[i]);
    double term = clipped_surrogate(ratio, adv[i], cfg.clip_eps);
    if (group.logp_ref) term -= cfg.kl_beta * kl_term((*group.logp_new)[i], (*group.logp_ref)[i]);
    total += term;
  }
  return total / static_cast<double>(group.rewards.size());
}

}  // namespace sqlcritic
