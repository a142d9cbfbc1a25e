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

#include <span>

#include <torch/torch.h>

#include "svsr/media/chunk.hpp"
#include "svsr/media/clip.hpp"
#include "svsr/media/image.hpp"
#include "svsr/media/rotation.hpp"

namespace svsr::nn {

/// [T, H, W] float32 intensities in [0, 1].
torch::Tensor clip_to_tensor(const media::VideoClip& clip);
/// [H, W] float32 in [0, 1] from a gray 96x96 image.
torch::Tensor image_to_tensor(const media::Image& gray);
/// Rounds clamp(x, 0, 1) * 255; `frames` is [T, 96, 96].
media::VideoClip tensor_to_clip(const torch::Tensor& frames, float fps);
torch::Tensor chunks_to_tensor(const media::SpeechChunks& chunks);        // [n, L]
torch::Tensor rotations_to_tensor(const media::RotationSequence& rots);   // [n, 9]

/// Stacks clips into [B, T_max, 96, 96], zero-padded, plus lengths [B].
std::pair<torch::Tensor, torch::Tensor> pad_clips(std::span<const media::VideoClip* const> clips);

}  // namespace svsr::nn
