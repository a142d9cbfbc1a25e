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

#include "svsr/eval/wer.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "svsr/common/error.hpp"

namespace svsr::eval {

std::string normalize_text(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (c < 128 && std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (c < 128 && std::ispunct(c) && c != '\'') continue;
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c < 128 ? static_cast<char>(std::tolower(c)) : ch);
  }
  return out;
}

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{normalize_text(text)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

WerCounts& WerCounts::operator+=(const WerCounts& o) {
  ref_words += o.ref_words;
  substitutions += o.substitutions;
  insertions += o.insertions;
  deletions += o.deletions;
  return *this;
}

WerCounts align_words(const std::vector<std::string>& ref, const std::vector<std::string>& hyp) {
  const auto n = ref.size(), m = hyp.size();
  std::vector<std::vector<std::int64_t>> d(n + 1, std::vector<std::int64_t>(m + 1));
  for (std::size_t i = 0; i <= n; ++i) d[i][0] = static_cast<std::int64_t>(i);
  for (std::size_t j = 0; j <= m; ++j) d[0][j] = static_cast<std::int64_t>(j);
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= m; ++j)
      d[i][j] = std::min({d[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1), d[i - 1][j] + 1, d[i][j - 1] + 1});

  WerCounts c;
  c.ref_words = static_cast<std::int64_t>(n);
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && d[i][j] == d[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1)) {
      if (ref[i - 1] != hyp[j - 1]) ++c.substitutions;
      --i, --j;
    } else if (i > 0 && d[i][j] == d[i - 1][j] + 1) {
      ++c.deletions;
      --i;
    } else {
      ++c.insertions;
      --j;
    }
  }
  return c;
}

double WerRow::wer() const {
  return static_cast<double>(counts.errors()) / static_cast<double>(std::max<std::int64_t>(1, counts.ref_words));
}

WerRow score_utterance(const std::string& id, std::string_view ref, std::string_view hyp) {
  WerRow row;
  row.id = id;
  row.ref = normalize_text(ref);
  row.hyp = normalize_text(hyp);
  row.counts = align_words(split_words(row.ref), split_words(row.hyp));
  return row;
}

WerCounts WerReport::totals() const {
  WerCounts t;
  for (const auto& r : rows) t += r.counts;
  return t;
}

double WerReport::wer() const {
  const auto t = totals();
  if (t.ref_words == 0) return t.errors() == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  return static_cast<double>(t.errors()) / static_cast<double>(t.ref_words);
}

nlohmann::ordered_json WerReport::to_json() const {
  nlohmann::ordered_json j;
  const auto t = totals();
  j["wer"] = wer();
  j["ref_words"] = t.ref_words;
  j["substitutions"] = t.substitutions;
  j["insertions"] = t.insertions;
  j["deletions"] = t.deletions;
  j["utterances"] = nlohmann::ordered_json::array();
  for (const auto& r : rows)
    j["utterances"].push_back({{"id", r.id},
                               {"ref", r.ref},
                               {"hyp", r.hyp},
                               {"ref_words", r.counts.ref_words},
                               {"substitutions", r.counts.substitutions},
                               {"insertions", r.counts.insertions},
                               {"deletions", r.counts.deletions}});
  return j;
}

WerReport WerReport::from_json(const nlohmann::json& j) {
  WerReport rep;
  for (const auto& u : j.at("utterances")) {
    WerRow r;
    r.id = u.at("id").get<std::string>();
    r.ref = u.at("ref").get<std::string>();
    r.hyp = u.at("hyp").get<std::string>();
    r.counts.ref_words = u.at("ref_words").get<std::int64_t>();
    r.counts.substitutions = u.at("substitutions").get<std::int64_t>();
    r.counts.insertions = u.at("insertions").get<std::int64_t>();
    r.counts.deletions = u.at("deletions").get<std::int64_t>();
    rep.rows.push_back(std::move(r));
  }
  return rep;
}

void WerReport::write_json(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
  out << to_json().dump(2) << "\n";
}

namespace {
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q.push_back('"');
    q.push_back(c);
  }
  return q + "\"";
}
}  // namespace

void WerReport::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
  out << "id,ref_words,substitutions,insertions,deletions,wer,ref,hyp\n";
  for (const auto& r : rows)
    out << fmt::format("{},{},{},{},{},{},{},{}\n", csv_field(r.id), r.counts.ref_words, r.counts.substitutions,
                       r.counts.insertions, r.counts.deletions, r.wer(), csv_field(r.ref), csv_field(r.hyp));
}

}  // namespace svsr::eval
