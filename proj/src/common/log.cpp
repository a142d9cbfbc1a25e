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

#include "svsr/common/log.hpp"

#include <fstream>
#include <iostream>
#include <mutex>

namespace svsr::log {

namespace {

struct Sink {
  std::mutex mu;
  Level level = Level::info;
  std::ofstream file;
};

Sink& sink() {
  static Sink s;
  return s;
}

const char* tag(Level l) {
  switch (l) {
    case Level::debug: return "DEBUG";
    case Level::info: return "INFO";
    case Level::warn: return "WARN";
    case Level::error: return "ERROR";
  }
  return "";
}

}  // namespace

void set_level(Level level) {
  std::lock_guard lock(sink().mu);
  sink().level = level;
}

Level level() {
  std::lock_guard lock(sink().mu);
  return sink().level;
}

void set_file_sink(const std::filesystem::path& path) {
  std::lock_guard lock(sink().mu);
  auto& s = sink();
  if (s.file.is_open()) s.file.close();
  if (!path.empty()) s.file.open(path, std::ios::app);
}

void write(Level l, const std::string& message) {
  std::lock_guard lock(sink().mu);
  auto& s = sink();
  if (s.file.is_open()) {
    s.file << tag(l) << " " << message << "\n";
    s.file.flush();
  }
  if (static_cast<int>(l) < static_cast<int>(s.level)) return;
  std::cerr << tag(l) << " " << message << "\n";
}

}  // namespace svsr::log
