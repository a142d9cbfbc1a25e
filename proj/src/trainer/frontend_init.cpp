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

#include "svsr/trainer/frontend_init.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "svsr/common/error.hpp"

namespace svsr::trainer {

std::vector<std::string> init_frontend(vsr::VsrModel& model, const nn::Checkpoint& ckpt, const std::string& prefix) {
  const std::string fe = vsr::VsrModelImpl::kFrontendPrefix;
  std::vector<std::pair<std::string, torch::Tensor>> targets;
  for (const auto& p : model->named_parameters()) {
    if (p.key().rfind(fe, 0) == 0) targets.emplace_back(p.key(), p.value());
  }
  for (const auto& b : model->named_buffers()) {
    if (b.key().rfind(fe, 0) == 0) targets.emplace_back(b.key(), b.value());
  }
  std::vector<std::string> problems;
  for (const auto& [name, t] : targets) {
    const auto* src = ckpt.find(prefix + name);
    if (src == nullptr)
      problems.push_back(name + " (missing)");
    else if (src->sizes() != t.sizes())
      problems.push_back(fmt::format("{} (checkpoint {} vs model {})", name, fmt::join(src->sizes(), "x"),
                                     fmt::join(t.sizes(), "x")));
  }
  if (targets.empty()) problems.push_back("model has no front-end tensors");
  if (!problems.empty())
    throw ShapeError(fmt::format("front-end initialisation failed: {}", fmt::join(problems, ", ")));
  torch::NoGradGuard guard;
  std::vector<std::string> replaced;
  for (auto& [name, t] : targets) {
    t.copy_(*ckpt.find(prefix + name));
    replaced.push_back(name);
  }
  return replaced;
}

}  // namespace svsr::trainer
