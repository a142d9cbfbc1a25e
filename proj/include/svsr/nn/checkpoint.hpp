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
#include <string>
#include <utility>
#include <vector>

#include <torch/torch.h>

#include <json.hpp>

namespace svsr::nn {

/// Named tensors plus free-form metadata. Order of insertion is preserved on
/// disk, so saving the same checkpoint twice yields identical bytes.
struct Checkpoint {
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  std::vector<std::pair<std::string, torch::Tensor>> tensors;

  const torch::Tensor* find(const std::string& name) const;
  void put(const std::string& name, const torch::Tensor& t);
  /// SHA-256 over tensor names, dtypes, shapes and payloads; metadata is
  /// excluded so that provenance fields do not perturb the identity.
  std::string content_hash() const;
};

// File layout:
//   "SVCK" | u32 version | u64 header_bytes | header JSON | tensor payloads
// The header lists {name, dtype, shape, offset, nbytes} per tensor, offsets
// relative to the first payload byte. Tensors are stored contiguous, little
// endian, as float32 / float64 / int64.
inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Appends parameters and buffers of `module` under `prefix` (e.g. "g.").
void collect_module(Checkpoint& ckpt, const std::string& prefix, const torch::nn::Module& module);

/// Copies tensors named `prefix + name` into the module's parameters and
/// buffers. Missing names or shape mismatches throw ShapeError listing every
/// offending tensor.
void restore_module(const Checkpoint& ckpt, const std::string& prefix, torch::nn::Module& module);

/// Parameter + buffer snapshot of a module as a name -> tensor map (cloned).
std::vector<std::pair<std::string, torch::Tensor>> snapshot(const torch::nn::Module& module);

std::int64_t count_parameters(const torch::nn::Module& module);

}  // namespace svsr::nn
