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

#include "svsr/vsr/averaging.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "svsr/common/error.hpp"

namespace svsr::vsr {

namespace fs = std::filesystem;

nn::Checkpoint average_checkpoints(const std::vector<nn::Checkpoint>& ckpts) {
  if (ckpts.empty()) throw ConfigError("average_checkpoints needs at least one checkpoint");
  const auto& last = ckpts.back();
  nn::Checkpoint out;
  out.meta = last.meta;
  for (const auto& [name, ref] : last.tensors) {
    if (!ref.is_floating_point()) {
      out.put(name, ref.clone());
      continue;
    }
    // Mean as an offset from the first input: identical inputs average to
    // themselves bit for bit, even for float64 tensors.
    const auto* first = ckpts.front().find(name);
    if (first == nullptr) throw ShapeError(fmt::format("checkpoint lacks tensor '{}'", name));
    const auto origin = first->to(torch::kFloat64);
    auto acc = torch::zeros(ref.sizes(), torch::kFloat64);
    for (const auto& c : ckpts) {
      const auto* t = c.find(name);
      if (t == nullptr) throw ShapeError(fmt::format("checkpoint lacks tensor '{}'", name));
      if (t->sizes() != ref.sizes()) throw ShapeError(fmt::format("tensor '{}' differs in shape", name));
      acc += t->to(torch::kFloat64) - origin;
    }
    out.put(name, (origin + acc / static_cast<double>(ckpts.size())).to(ref.scalar_type()));
  }
  for (const auto& c : ckpts)
    if (c.tensors.size() != last.tensors.size()) throw ShapeError("checkpoints list different tensor sets");
  return out;
}

std::vector<fs::path> last_checkpoints(const fs::path& dir, std::size_t k) {
  if (!fs::is_directory(dir)) throw MissingArtifactError(fmt::format("checkpoint directory {} not found", dir.string()));
  std::vector<std::pair<fs::file_time_type, fs::path>> found;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".ckpt") found.emplace_back(e.last_write_time(), e.path());
  std::sort(found.begin(), found.end());
  std::vector<fs::path> out;
  const auto start = found.size() > k ? found.size() - k : 0;
  for (auto i = start; i < found.size(); ++i) out.push_back(found[i].second);
  return out;
}

nn::Checkpoint average_last(const fs::path& dir, std::size_t k) {
  const auto paths = last_checkpoints(dir, k);
  if (paths.empty()) throw MissingArtifactError(fmt::format("no checkpoints in {}", dir.string()));
  std::vector<nn::Checkpoint> ckpts;
  for (const auto& p : paths) ckpts.push_back(nn::load_checkpoint(p));
  return average_checkpoints(ckpts);
}

}  // namespace svsr::vsr
