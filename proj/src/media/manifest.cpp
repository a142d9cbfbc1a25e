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

#include "svsr/media/manifest.hpp"

#include <fstream>
#include <unordered_set>

#include <fmt/format.h>

#include "svsr/common/error.hpp"

namespace svsr::media {

namespace fs = std::filesystem;

DatasetRole parse_role(const std::string& name) {
  if (name == "real") return DatasetRole::real;
  if (name == "av" || name == "audio_visual") return DatasetRole::audio_visual;
  if (name == "speech") return DatasetRole::speech;
  if (name == "faces") return DatasetRole::faces;
  if (name == "synthetic" || name == "synth") return DatasetRole::synthetic;
  throw ConfigError("unknown dataset role '" + name + "'");
}

std::string to_string(DatasetRole role) {
  switch (role) {
    case DatasetRole::real: return "real";
    case DatasetRole::audio_visual: return "av";
    case DatasetRole::speech: return "speech";
    case DatasetRole::faces: return "faces";
    case DatasetRole::synthetic: return "synthetic";
  }
  return "?";
}

bool ManifestEntry::has_role(DatasetRole role) const {
  switch (role) {
    case DatasetRole::real:
    case DatasetRole::synthetic: return video_path && transcript;
    case DatasetRole::audio_visual: return video_path && audio_path;
    case DatasetRole::speech: return audio_path && transcript;
    case DatasetRole::faces: return image_path.has_value();
  }
  return false;
}

nlohmann::ordered_json entry_to_json(const ManifestEntry& e) {
  nlohmann::ordered_json j;
  j["id"] = e.id;
  if (e.video_path) j["video_path"] = e.video_path->generic_string();
  if (e.audio_path) j["audio_path"] = e.audio_path->generic_string();
  if (e.image_path) j["image_path"] = e.image_path->generic_string();
  if (e.transcript) j["transcript"] = *e.transcript;
  if (e.bbox) j["bbox"] = {e.bbox->x, e.bbox->y, e.bbox->width, e.bbox->height};
  j["split"] = e.split;
  if (!e.meta.empty()) j["meta"] = e.meta;
  return j;
}

ManifestEntry entry_from_json(const nlohmann::json& j) {
  ManifestEntry e;
  if (!j.contains("id") || !j["id"].is_string()) throw FormatError("manifest entry lacks a string 'id'");
  e.id = j["id"].get<std::string>();
  if (j.contains("video_path")) e.video_path = fs::path(j["video_path"].get<std::string>());
  if (j.contains("audio_path")) e.audio_path = fs::path(j["audio_path"].get<std::string>());
  if (j.contains("image_path")) e.image_path = fs::path(j["image_path"].get<std::string>());
  if (j.contains("transcript")) e.transcript = j["transcript"].get<std::string>();
  if (j.contains("bbox")) {
    const auto& b = j["bbox"];
    if (!b.is_array() || b.size() != 4) throw FormatError("entry " + e.id + ": bbox must be [x, y, width, height]");
    e.bbox = BBox{b[0].get<int>(), b[1].get<int>(), b[2].get<int>(), b[3].get<int>()};
  }
  if (j.contains("split")) e.split = j["split"].get<std::string>();
  if (j.contains("meta")) e.meta = j["meta"];
  return e;
}

fs::path Manifest::resolve(const fs::path& p) const {
  if (p.is_absolute() || base_dir_.empty()) return p;
  return base_dir_ / p;
}

void Manifest::add(ManifestEntry entry) {
  if (find(entry.id) != nullptr) throw DataError("duplicate manifest id '" + entry.id + "'");
  entries_.push_back(std::move(entry));
}

const ManifestEntry* Manifest::find(const std::string& id) const {
  for (const auto& e : entries_)
    if (e.id == id) return &e;
  return nullptr;
}

Manifest Manifest::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingArtifactError("manifest " + path.string() + " does not exist");
  Manifest m(path.parent_path());
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(fmt::format("{}:{}: {}", path.string(), lineno, e.what()));
    }
    ManifestEntry e = entry_from_json(j);
    if (!ids.insert(e.id).second) throw DataError(fmt::format("{}:{}: duplicate id '{}'", path.string(), lineno, e.id));
    for (const auto* p : {&e.video_path, &e.audio_path, &e.image_path}) {
      if (*p && !fs::exists(m.resolve(**p)))
        throw DataError(fmt::format("{}:{}: entry '{}' references missing file {}", path.string(), lineno, e.id,
                                    m.resolve(**p).string()));
    }
    m.entries_.push_back(std::move(e));
  }
  return m;
}

void Manifest::save(const fs::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& e : entries_) out << entry_to_json(e).dump() << "\n";
}

void Manifest::validate(DatasetRole role) const {
  for (const auto& e : entries_)
    if (!e.has_role(role))
      throw DataError(fmt::format("entry '{}' lacks the fields required for a {} dataset", e.id, to_string(role)));
}

std::size_t Manifest::count(DatasetRole role) const {
  std::size_t n = 0;
  for (const auto& e : entries_) n += e.has_role(role) ? 1 : 0;
  return n;
}

Manifest Manifest::filter_split(const std::string& split) const {
  Manifest m(base_dir_);
  for (const auto& e : entries_)
    if (e.split == split) m.entries_.push_back(e);
  return m;
}

}  // namespace svsr::media
