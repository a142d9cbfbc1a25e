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

#include <string>
#include <vector>

#include "svsr/nn/checkpoint.hpp"
#include "svsr/vsr/model.hpp"

namespace svsr::trainer {

/// Copies every front-end tensor stored under `prefix` + "frontend." in
/// `ckpt` into `model`, leaving all other tensors untouched. Throws
/// ShapeError naming each missing or mismatched tensor. Returns the names
/// that were replaced.
std::vector<std::string> init_frontend(vsr::VsrModel& model, const nn::Checkpoint& ckpt,
                                       const std::string& prefix = "model.");

}  // namespace svsr::trainer
