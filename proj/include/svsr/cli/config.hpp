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
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace svsr::cli {

struct KeySpec {
  std::string key;
  std::string default_value;  // ignored when required
  std::string help;
  bool required = false;
};

/// Effective flat configuration of one subcommand run.
class RunConfig {
 public:
  RunConfig() = default;
  RunConfig(std::string command, std::map<std::string, std::string> values);

  const std::string& command() const { return command_; }
  const std::map<std::string, std::string>& values() const { return values_; }

  bool has(const std::string& key) const;
  const std::string& str(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  std::uint64_t unsigned_integer(const std::string& key) const;
  double real(const std::string& key) const;
  bool boolean(const std::string& key) const;
  std::filesystem::path path(const std::string& key) const;
  /// Comma-separated list; empty string gives an empty list.
  std::vector<std::string> list(const std::string& key) const;

  nlohmann::ordered_json to_json() const;
  /// SHA-256 of the canonical JSON form (command + sorted values).
  std::string hash() const;

 private:
  std::string command_;
  std::map<std::string, std::string> values_;
};

/// Merges defaults, an optional key=value config file and command-line
/// overrides. Unknown keys and missing required keys throw ConfigError.
RunConfig resolve_config(const std::string& command, const std::vector<KeySpec>& specs,
                         const std::map<std::string, std::string>& file_values,
                         const std::map<std::string, std::string>& cli_values);

/// $SVSR_RUN_ROOT, or ./runs when unset.
std::filesystem::path run_root();
/// run_root() / "<command>-<first 12 hash chars>".
std::filesystem::path run_directory(const RunConfig& cfg);

/// Throws MissingArtifactError naming the subcommand that produces `path`.
void require_artifact(const std::filesystem::path& path, const std::string& key, const std::string& producer);

}  // namespace svsr::cli
