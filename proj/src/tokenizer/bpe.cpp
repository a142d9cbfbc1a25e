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

#include "svsr/tokenizer/bpe.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "svsr/common/error.hpp"

namespace svsr::tokenizer {

namespace {

const std::vector<std::string> kSpecialPieces = {"<blank>", "<pad>", "<unk>", "<s>", "</s>"};

std::size_t codepoint_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 1;
}

std::vector<std::string> split_words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> words;
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

using Symbols = std::vector<std::string>;

}  // namespace

std::vector<std::string> utf8_codepoints(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t n = codepoint_length(static_cast<unsigned char>(text[i]));
    if (i + n > text.size()) n = 1;
    out.emplace_back(text.substr(i, n));
    i += n;
  }
  return out;
}

Vocab::Vocab(std::vector<std::string> pieces, std::vector<std::string> merges)
    : pieces_(std::move(pieces)), merges_(std::move(merges)) {
  if (pieces_.size() < kNumSpecials) throw FormatError("vocabulary lacks the special pieces");
  for (int i = 0; i < kNumSpecials; ++i)
    if (pieces_[i] != kSpecialPieces[i]) throw FormatError(fmt::format("vocabulary id {} must be {}", i, kSpecialPieces[i]));
  for (std::size_t i = kNumSpecials; i < pieces_.size(); ++i) {
    if (pieces_[i].empty()) throw FormatError("empty vocabulary piece");
    if (!index_.emplace(pieces_[i], static_cast<int>(i)).second)
      throw FormatError("duplicate vocabulary piece '" + pieces_[i] + "'");
    max_piece_bytes_ = std::max(max_piece_bytes_, pieces_[i].size());
  }
}

Vocab Vocab::train(std::span<const std::string> corpus, std::size_t size) {
  std::map<std::string, std::size_t> word_counts;
  for (const auto& line : corpus)
    for (auto& w : split_words(line)) ++word_counts[w];
  if (word_counts.empty()) throw DataError("cannot train a vocabulary on an empty corpus");

  std::vector<std::pair<Symbols, std::size_t>> words;
  std::set<std::string> alphabet;
  for (const auto& [w, n] : word_counts) {
    Symbols s{std::string(kWordBoundary)};
    for (auto& cp : utf8_codepoints(w)) s.push_back(cp);
    alphabet.insert(s.begin(), s.end());
    words.emplace_back(std::move(s), n);
  }

  const std::size_t floor = kNumSpecials + alphabet.size();
  if (size < floor)
    throw ConfigError(fmt::format("vocabulary size {} is below the character floor of {} ({} specials + {} characters)",
                                  size, floor, kNumSpecials, alphabet.size()));

  std::vector<std::string> pieces(kSpecialPieces);
  pieces.insert(pieces.end(), alphabet.begin(), alphabet.end());
  std::set<std::string> known(alphabet.begin(), alphabet.end());
  known.insert(kSpecialPieces.begin(), kSpecialPieces.end());
  std::vector<std::string> merges;

  while (pieces.size() < size) {
    std::map<std::pair<std::string, std::string>, std::size_t> pair_counts;
    for (const auto& [syms, n] : words)
      for (std::size_t i = 0; i + 1 < syms.size(); ++i) pair_counts[{syms[i], syms[i + 1]}] += n;
    if (pair_counts.empty())
      throw ConfigError(fmt::format("cannot reach vocabulary size {}: merges exhausted at {} pieces", size, pieces.size()));

    // std::map iterates in lexicographic pair order, so the first maximum wins ties.
    auto best = pair_counts.begin();
    for (auto it = pair_counts.begin(); it != pair_counts.end(); ++it)
      if (it->second > best->second) best = it;
    const auto [left, right] = best->first;
    const std::string merged = left + right;

    for (auto& [syms, n] : words) {
      Symbols next;
      next.reserve(syms.size());
      for (std::size_t i = 0; i < syms.size(); ++i) {
        if (i + 1 < syms.size() && syms[i] == left && syms[i + 1] == right) {
          next.push_back(merged);
          ++i;
        } else {
          next.push_back(syms[i]);
        }
      }
      syms = std::move(next);
    }
    merges.push_back(merged);
    if (known.insert(merged).second) pieces.push_back(merged);
  }
  return Vocab(std::move(pieces), std::move(merges));
}

std::optional<int> Vocab::find(std::string_view piece) const {
  auto it = index_.find(std::string(piece));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<int> Vocab::encode(std::string_view text) const {
  std::vector<int> ids;
  if (text.empty()) return ids;

  std::string s(kWordBoundary);
  for (char c : text) {
    if (c == ' ')
      s += kWordBoundary;
    else
      s.push_back(c);
  }

  std::size_t pos = 0;
  while (pos < s.size()) {
    // Candidate end offsets on code point boundaries, longest first.
    std::vector<std::size_t> ends;
    for (std::size_t e = pos; e < s.size() && e - pos < max_piece_bytes_;) {
      e += std::min(codepoint_length(static_cast<unsigned char>(s[e])), s.size() - e);
      ends.push_back(e);
    }
    bool matched = false;
    for (auto it = ends.rbegin(); it != ends.rend(); ++it) {
      auto hit = index_.find(s.substr(pos, *it - pos));
      if (hit != index_.end()) {
        ids.push_back(hit->second);
        pos = *it;
        matched = true;
        break;
      }
    }
    if (!matched) {
      ids.push_back(specials_.unk);
      pos += std::min(codepoint_length(static_cast<unsigned char>(s[pos])), s.size() - pos);
    }
  }
  return ids;
}

std::string Vocab::decode(std::span<const int> ids) const {
  std::string joined;
  for (int id : ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= pieces_.size())
      throw ShapeError(fmt::format("token id {} outside vocabulary of size {}", id, pieces_.size()));
    if (id == specials_.unk)
      joined += kUnknownGlyph;
    else if (!is_special(id))
      joined += pieces_[static_cast<std::size_t>(id)];
  }
  std::string out;
  out.reserve(joined.size());
  for (std::size_t i = 0; i < joined.size();) {
    if (joined.compare(i, kWordBoundary.size(), kWordBoundary) == 0) {
      out.push_back(' ');
      i += kWordBoundary.size();
    } else {
      out.push_back(joined[i++]);
    }
  }
  if (!out.empty() && out.front() == ' ') out.erase(out.begin());
  return out;
}

nlohmann::json Vocab::to_json() const {
  nlohmann::json j;
  j["pieces"] = pieces_;
  j["specials"] = {{"blank", specials_.blank}, {"pad", specials_.pad}, {"unk", specials_.unk},
                   {"sos", specials_.sos},     {"eos", specials_.eos}};
  j["merges"] = merges_;
  return j;
}

Vocab Vocab::from_json(const nlohmann::json& j) {
  if (!j.contains("pieces")) throw FormatError("vocabulary JSON lacks 'pieces'");
  Vocab v(j["pieces"].get<std::vector<std::string>>(),
          j.contains("merges") ? j["merges"].get<std::vector<std::string>>() : std::vector<std::string>{});
  if (j.contains("specials")) {
    const auto& s = j["specials"];
    const SpecialIds expect;
    if (s.value("blank", -1) != expect.blank || s.value("pad", -1) != expect.pad || s.value("unk", -1) != expect.unk ||
        s.value("sos", -1) != expect.sos || s.value("eos", -1) != expect.eos)
      throw FormatError("vocabulary specials map does not match the fixed special ids");
  }
  return v;
}

Vocab Vocab::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingArtifactError("vocabulary " + path.string() + " does not exist (produce it with `svsr train-vocab`)");
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void Vocab::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << to_json().dump(1) << "\n";
}

}  // namespace svsr::tokenizer
