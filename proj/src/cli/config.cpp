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

#include "svsr/cli/config.hpp"

#include <charconv>
#include <cstdlib>
#include <sstream>

#include <fmt/format.h>

#include "svsr/common/error.hpp"
#include "svsr/common/hash.hpp"

namespace svsr::cli {

namespace fs = std::filesystem;

RunConfig::RunConfig(std::string command, std::map<std::string, std::string> values)
    : command_(std::move(command)), values_(std::move(values)) {}

bool RunConfig::has(const std::string& key) const { return values_.count(key) > 0; }

const std::string& RunConfig::str(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError(fmt::format("{}: no config key '{}'", command_, key));
  return it->second;
}

std::int64_t RunConfig::integer(const std::string& key) const {
  const auto& s = str(key);
  std::int64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ConfigError(fmt::format("{}: key '{}' expects an integer, got '{}'", command_, key, s));
  return v;
}

std::uint64_t RunConfig::unsigned_integer(const std::string& key) const {
  const auto& s = str(key);
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ConfigError(fmt::format("{}: key '{}' expects a nonnegative integer, got '{}'", command_, key, s));
  return v;
}

double RunConfig::real(const std::string& key) const {
  const auto& s = str(key);
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(fmt::format("{}: key '{}' expects a number, got '{}'", command_, key, s));
}

bool RunConfig::boolean(const std::string& key) const {
  const auto& s = str(key);
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw ConfigError(fmt::format("{}: key '{}' expects a boolean, got '{}'", command_, key, s));
}

fs::path RunConfig::path(const std::string& key) const { return fs::path(str(key)); }

std::vector<std::string> RunConfig::list(const std::string& key) const {
  std::vector<std::string> out;
  std::stringstream ss(str(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(' ');
    const auto e = item.find_last_not_of(' ');
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command_;
  j["config"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : values_) j["config"][k] = v;
  return j;
}

std::string RunConfig::hash() const { return sha256_hex(to_json().dump()); }

RunConfig resolve_config(const std::string& command, const std::vector<KeySpec>& specs,
                         const std::map<std::string, std::string>& file_values,
                         const std::map<std::string, std::string>& cli_values) {
  std::map<std::string, std::string> values;
  std::map<std::string, const KeySpec*> by_key;
  for (const auto& s : specs) {
    by_key[s.key] = &s;
    if (!s.required) values[s.key] = s.default_value;
  }
  for (const auto* src : {&file_values, &cli_values}) {
    for (const auto& [k, v] : *src) {
      if (!by_key.count(k)) throw ConfigError(fmt::format("{}: unknown config key '{}'", command, k));
      values[k] = v;
    }
  }
  for (const auto& s : specs)
    if (s.required && !values.count(s.key))
      throw ConfigError(fmt::format("{}: config key '{}' is required ({})", command, s.key, s.help));
  return RunConfig(command, std::move(values));
}

fs::path run_root() {
  if (const char* env = std::getenv("SVSR_RUN_ROOT"); env != nullptr && *env != '\0') return fs::path(env);
  return fs::path("runs");
}

fs::path run_directory(const RunConfig& cfg) { return run_root() / fmt::format("{}-{}", cfg.command(), cfg.hash().substr(0, 12)); }

void require_artifact(const fs::path& path, const std::string& key, const std::string& producer) {
  if (path.empty())
    throw MissingArtifactError(fmt::format("config key '{}' is empty; produce the input with `svsr {}`", key, producer));
  if (!fs::exists(path))
    throw MissingArtifactError(
        fmt::format("{} '{}' not found; produce it with `svsr {}`", key, path.string(), producer));
}

}  // namespace svsr::cli
