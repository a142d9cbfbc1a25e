// Copyright 2026  The svsr Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace svsr::eval {

/// Lowercases ASCII letters, drops ASCII punctuation other than apostrophes
/// and collapses whitespace runs to single spaces.
std::string normalize_text(std::string_view text);
std::vector<std::string> split_words(std::string_view text);

struct WerCounts {
  std::int64_t ref_words = 0;
  std::int64_t substitutions = 0;
  std::int64_t insertions = 0;
  std::int64_t deletions = 0;

  std::int64_t errors() const { return substitutions + insertions + deletions; }
  WerCounts& operator+=(const WerCounts& o);
  friend bool operator==(const WerCounts&, const WerCounts&) = default;
};

/// Minimum edit alignment with unit costs. Among optimal alignments the
/// backtrace prefers substitution/match, then deletion, then insertion.
WerCounts align_words(const std::vector<std::string>& ref, const std::vector<std::string>& hyp);

struct WerRow {
  std::string id;
  std::string ref;  // normalised
  std::string hyp;  // normalised
  WerCounts counts;
  /// errors / max(1, ref words).
  double wer() const;
};

WerRow score_utterance(const std::string& id, std::string_view ref, std::string_view hyp);

struct WerReport {
  std::vector<WerRow> rows;

  WerCounts totals() const;
  /// Σ errors / Σ reference words; 0 when both are 0, +inf when only the reference side is empty.
  double wer() const;

  nlohmann::ordered_json to_json() const;
  static WerReport from_json(const nlohmann::json& j);
  void write_json(const std::filesystem::path& path) const;
  void write_csv(const std::filesystem::path& path) const;
};

}  // namespace svsr::eval
