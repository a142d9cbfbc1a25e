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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace svsr::trainer {

using KeyValues = std::map<std::string, std::string>;

/// Multi-stage run description in flat `key = value` form:
///
///   stages = small, base
///   seed = 3
///   small.preset = desk-small
///   base.preset = desk
///   base.frontend_init = @small
///
/// Unprefixed keys apply to every stage; `stage.key` overrides for one stage.
/// A value `@stage` refers to the model produced by an earlier stage.
struct Recipe {
  std::vector<std::string> stages;
  KeyValues common;
  std::map<std::string, KeyValues> per_stage;

  static Recipe parse(std::string_view text);
  static Recipe load(const std::filesystem::path& path);

  KeyValues stage_config(const std::string& stage) const;
};

/// Parses `key = value` lines; '#' starts a comment.
KeyValues parse_key_values(std::string_view text, std::string_view origin);

/// Stage name when `value` has the form "@stage".
std::optional<std::string> stage_reference(const std::string& value);

}  // namespace svsr::trainer
