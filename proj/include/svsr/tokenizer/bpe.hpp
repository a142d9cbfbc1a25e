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

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace svsr::tokenizer {

/// U+2581, prefixed to every word and substituted for every space.
inline constexpr std::string_view kWordBoundary = "\xE2\x96\x81";
/// U+2047, emitted by decode() for unknown-token ids.
inline constexpr std::string_view kUnknownGlyph = "\xE2\x81\x87";

struct SpecialIds {
  int blank = 0;  // CTC only; never a decoder target
  int pad = 1;
  int unk = 2;
  int sos = 3;
  int eos = 4;
};
inline constexpr int kNumSpecials = 5;

/// Splits UTF-8 text into code points (as byte strings). Invalid bytes are
/// passed through one at a time.
std::vector<std::string> utf8_codepoints(std::string_view text);

/// Subword vocabulary learned by greedy pair merging and applied with greedy
/// longest-match segmentation. Immutable once built.
class Vocab {
 public:
  /// Learns a vocabulary of exactly `size` entries (specials included) from
  /// whitespace-separated words. Each merge takes the most frequent adjacent
  /// symbol pair; ties go to the lexicographically smallest (left, right).
  static Vocab train(std::span<const std::string> corpus, std::size_t size);

  static Vocab from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  static Vocab load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  std::vector<int> encode(std::string_view text) const;
  /// Throws ShapeError for ids outside the vocabulary. Special ids other
  /// than unk are dropped.
  std::string decode(std::span<const int> ids) const;

  std::size_t size() const { return pieces_.size(); }
  const std::string& piece(int id) const { return pieces_.at(static_cast<std::size_t>(id)); }
  std::optional<int> find(std::string_view piece) const;
  const SpecialIds& specials() const { return specials_; }
  const std::vector<std::string>& merges() const { return merges_; }

  bool is_special(int id) const { return id >= 0 && id < kNumSpecials; }

 private:
  Vocab(std::vector<std::string> pieces, std::vector<std::string> merges);

  std::vector<std::string> pieces_;
  std::vector<std::string> merges_;  // learned merge results, in order
  std::unordered_map<std::string, int> index_;  // learned pieces only
  std::size_t max_piece_bytes_ = 0;
  SpecialIds specials_;
};

}  // namespace svsr::tokenizer
