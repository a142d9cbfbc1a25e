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
#include <string>
#include <vector>

#include <json.hpp>

#include "svsr/media/image.hpp"

namespace svsr::media {

/// Dataset roles from the semi-supervised setup:
///   real      video + transcript
///   audio_visual  video + audio
///   speech    audio + transcript
///   faces     image only
///   synthetic generated video + transcript
enum class DatasetRole { real, audio_visual, speech, faces, synthetic };

DatasetRole parse_role(const std::string& name);
std::string to_string(DatasetRole role);

struct ManifestEntry {
  std::string id;
  std::optional<std::filesystem::path> video_path;
  std::optional<std::filesystem::path> audio_path;
  std::optional<std::filesystem::path> image_path;
  std::optional<std::string> transcript;
  std::optional<BBox> bbox;
  std::string split = "train";
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();

  bool has_role(DatasetRole role) const;
};

/// JSON-lines manifest. Relative paths are interpreted against the directory
/// holding the manifest file.
class Manifest {
 public:
  Manifest() = default;
  explicit Manifest(std::filesystem::path base_dir) : base_dir_(std::move(base_dir)) {}

  /// Parses and checks id uniqueness plus existence of every referenced path.
  static Manifest load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  std::vector<ManifestEntry>& entries() { return entries_; }
  const std::vector<ManifestEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  const std::filesystem::path& base_dir() const { return base_dir_; }
  void set_base_dir(std::filesystem::path dir) { base_dir_ = std::move(dir); }
  std::filesystem::path resolve(const std::filesystem::path& p) const;

  void add(ManifestEntry entry);
  const ManifestEntry* find(const std::string& id) const;

  /// Throws DataError naming the first entry lacking the fields `role` needs.
  void validate(DatasetRole role) const;
  std::size_t count(DatasetRole role) const;
  Manifest filter_split(const std::string& split) const;

 private:
  std::filesystem::path base_dir_;
  std::vector<ManifestEntry> entries_;
};

nlohmann::ordered_json entry_to_json(const ManifestEntry& e);
ManifestEntry entry_from_json(const nlohmann::json& j);

}  // namespace svsr::media
