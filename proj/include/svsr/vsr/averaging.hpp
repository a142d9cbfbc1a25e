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
#include <vector>

#include "svsr/nn/checkpoint.hpp"

namespace svsr::vsr {

/// Elementwise mean of floating tensors (accumulated in double). Integer
/// tensors and metadata are taken from the last checkpoint. All inputs must
/// list the same names and shapes.
nn::Checkpoint average_checkpoints(const std::vector<nn::Checkpoint>& ckpts);

/// The last `k` checkpoint files of `dir` (extension .ckpt) in modification
/// time order, ties broken by file name. Fewer are returned if fewer exist.
std::vector<std::filesystem::path> last_checkpoints(const std::filesystem::path& dir, std::size_t k);

nn::Checkpoint average_last(const std::filesystem::path& dir, std::size_t k);

}  // namespace svsr::vsr
