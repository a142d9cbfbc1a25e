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

#include "svsr/trainer/recipe.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "svsr/common/error.hpp"

namespace svsr::trainer {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

KeyValues parse_key_values(std::string_view text, std::string_view origin) {
  KeyValues out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(fmt::format("{}:{}: expected 'key = value'", origin, lineno));
    const auto key = trim(std::string_view(body).substr(0, eq));
    const auto value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ConfigError(fmt::format("{}:{}: empty key", origin, lineno));
    if (!out.emplace(key, value).second) throw ConfigError(fmt::format("{}:{}: duplicate key '{}'", origin, lineno, key));
  }
  return out;
}

std::optional<std::string> stage_reference(const std::string& value) {
  if (value.size() > 1 && value[0] == '@') return value.substr(1);
  return std::nullopt;
}

Recipe Recipe::parse(std::string_view text) {
  Recipe r;
  auto kv = parse_key_values(text, "recipe");
  const auto it = kv.find("stages");
  if (it == kv.end()) throw ConfigError("recipe lacks a 'stages' key");
  std::stringstream ss(it->second);
  std::string name;
  while (std::getline(ss, name, ',')) {
    name = trim(name);
    if (name.empty()) continue;
    if (std::find(r.stages.begin(), r.stages.end(), name) != r.stages.end())
      throw ConfigError(fmt::format("stage '{}' listed twice", name));
    r.stages.push_back(name);
  }
  if (r.stages.empty()) throw ConfigError("recipe lists no stages");
  kv.erase(it);
  for (const auto& [key, value] : kv) {
    const auto dot = key.find('.');
    if (dot == std::string::npos) {
      r.common[key] = value;
      continue;
    }
    const auto stage = key.substr(0, dot);
    if (std::find(r.stages.begin(), r.stages.end(), stage) == r.stages.end())
      throw ConfigError(fmt::format("key '{}' names undeclared stage '{}'", key, stage));
    r.per_stage[stage][key.substr(dot + 1)] = value;
  }
  // References may only point backwards.
  for (std::size_t i = 0; i < r.stages.size(); ++i) {
    for (const auto& [key, value] : r.stage_config(r.stages[i])) {
      if (auto ref = stage_reference(value)) {
        const auto pos = std::find(r.stages.begin(), r.stages.end(), *ref);
        if (pos == r.stages.end() || static_cast<std::size_t>(pos - r.stages.begin()) >= i)
          throw ConfigError(fmt::format("stage '{}' key '{}' refers to '{}', which is not an earlier stage",
                                        r.stages[i], key, *ref));
      }
    }
  }
  return r;
}

Recipe Recipe::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingArtifactError(fmt::format("recipe {} not found", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

KeyValues Recipe::stage_config(const std::string& stage) const {
  KeyValues out = common;
  if (const auto it = per_stage.find(stage); it != per_stage.end())
    for (const auto& [k, v] : it->second) out[k] = v;
  return out;
}

}  // namespace svsr::trainer
