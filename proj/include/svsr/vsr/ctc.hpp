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

#include <vector>

#include <torch/torch.h>

namespace svsr::vsr {

/// Returned (as a constant) for utterances whose target cannot be aligned
/// within the available frames.
inline constexpr double kCtcInfeasibleLoss = 1e4;

/// Frames needed to emit `target`: its length plus one per adjacent repeat.
std::int64_t ctc_min_frames(const std::vector<int>& target);

/// Negative log marginal likelihood of each target under CTC, computed by the
/// log-space forward algorithm. log_probs [B, T, V] (log-softmax outputs, any
/// floating dtype), input_lengths [B]. Returns per-utterance losses [B].
torch::Tensor ctc_loss(const torch::Tensor& log_probs, const torch::Tensor& input_lengths,
                       const std::vector<std::vector<int>>& targets, int blank = 0);

/// Single-utterance form on raw logits [T, V].
torch::Tensor ctc_loss(const torch::Tensor& logits, const std::vector<int>& target, int blank = 0);

}  // namespace svsr::vsr
