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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace sqlcritic {

enum class Hardness { kEasy, kMedium, kHard, kExtra, kUnknown };

std::string_view to_string(Hardness h);
// Case-insensitive; unrecognized names map to kUnknown.
Hardness hardness_from_string(std::string_view name);

// A single-file SQLite database laid out as <root>/<db_id>/<db_id>.sqlite.
struct DatabaseRef {
  std::string db_id;
  std::filesystem::path path;

  static DatabaseRef resolve(const std::filesystem::path& root,
                             const std::string& db_id);

  bool operator==(const DatabaseRef&) const = default;
};

// One judging task as shown to the critic, plus the training-time ground
// truth when it exists.
struct EvalSample {
  std::string sample_id;
  std::string question;
  std::string schema_text;
  std::string predicted_sql;
  std::optional<std::string> gold_sql;
  // true means the predicted SQL is correct.
  std::optional<bool> label;
  DatabaseRef db;
  Hardness hardness = Hardness::kUnknown;
  std::optional<std::string> critique_text;

  bool operator==(const EvalSample&) const = default;
};

}  // namespace sqlcritic
