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

#include <torch/torch.h>

#include "svsr/nn/checkpoint.hpp"

namespace svsr::nn {

// Adam/AdamW moments and step counters, keyed by parameter position in the
// optimizer's first parameter group.
void save_optimizer(Checkpoint& ckpt, const std::string& prefix, torch::optim::Adam& opt);
void load_optimizer(const Checkpoint& ckpt, const std::string& prefix, torch::optim::Adam& opt);
void save_optimizer(Checkpoint& ckpt, const std::string& prefix, torch::optim::AdamW& opt);
void load_optimizer(const Checkpoint& ckpt, const std::string& prefix, torch::optim::AdamW& opt);

}  // namespace svsr::nn
