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

#include "svsr/lipgen/networks.hpp"
#include "svsr/media/chunk.hpp"
#include "svsr/media/clip.hpp"
#include "svsr/media/image.hpp"
#include "svsr/media/rotation.hpp"
#include "svsr/nn/checkpoint.hpp"

namespace svsr::lipgen {

/// One frame per speech chunk, conditioned on `first_frame` (96x96 gray).
/// Runs in eval mode without gradients. Throws ShapeError when the rotation
/// and chunk counts differ.
media::VideoClip generate(Generator& g, const media::Image& first_frame, const media::SpeechChunks& speech,
                          const media::RotationSequence& rotations, float fps = media::kDefaultFps);
media::VideoClip generate(Generator& g, std::span<const std::uint8_t> first_frame, const media::SpeechChunks& speech,
                          const media::RotationSequence& rotations, float fps = media::kDefaultFps);

/// Builds a generator from a lip animation checkpoint (tensors under "g.").
Generator load_generator(const nn::Checkpoint& ckpt);
Generator load_generator(const std::filesystem::path& path);

}  // namespace svsr::lipgen
