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


#include "sqlcritic/types.hpp"

#include <algorithm>
#include <cctype>

namespace sqlcritic {

std::string_view to_string(Hardness h) {
  switch (h) {
    case Hardness::kEasy: return "easy";
    case Hardness::kMedium: return "medium";
    case Hardness::kHard: return "hard";
    case Hardness::kExtra: return "extra";
    case Hardness::kUnknown: return "unknown";
  }
  return "unknown";
}

Hardness hardness_from_string(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "easy") return Hardness::kEasy;
  if (lower == "medium" || lower == "moderate") return Hardness::kMedium;
  if (lower == "hard" || lower == "challenging") return Hardness::kHard;
  if (lower == "extra" || lower == "extra hard") return Hardness::kExtra;
  return Hardness::kUnknown;
}

DatabaseRef DatabaseRef::resolve(const std::filesystem::path& root,
                                 const std::string& db_id) {
  return DatabaseRef{db_id, root / db_id / (db_id + ".sqlite")};
}

}  // namespace sqlcritic
