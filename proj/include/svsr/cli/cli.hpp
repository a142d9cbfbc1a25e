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

#include <ostream>
#include <string>
#include <vector>

#include "svsr/cli/config.hpp"
#include "svsr/common/error.hpp"

namespace svsr::cli {

struct CommandSpec {
  std::string name;
  std::string summary;
  std::vector<KeySpec> keys;
  /// Runs the command inside `run_dir`; `out` receives a short summary.
  std::function<void(const RunConfig& cfg, const std::filesystem::path& run_dir, std::ostream& out)> run;
};

const std::vector<CommandSpec>& commands();

/// Process exit status for each error category (0 is success, 1 unexpected).
int exit_code(ErrorKind kind);

/// Entry point shared by the svsr binary and in-process tests. `args`
/// excludes the program name, e.g. {"decode", "--model", "m.ckpt", ...}.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace svsr::cli
