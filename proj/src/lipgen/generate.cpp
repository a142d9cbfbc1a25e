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

#include "svsr/lipgen/generate.hpp"

#include <fmt/format.h>

#include "svsr/common/error.hpp"
#include "svsr/nn/tensors.hpp"

namespace svsr::lipgen {

media::VideoClip generate(Generator& g, std::span<const std::uint8_t> first_frame, const media::SpeechChunks& speech,
                          const media::RotationSequence& rotations, float fps) {
  if (rotations.size() != speech.count)
    throw ShapeError(fmt::format("rotation sequence has {} elements but speech has {} chunks", rotations.size(),
                                 speech.count));
  if (first_frame.size() != static_cast<std::size_t>(media::kFrameSize * media::kFrameSize))
    throw ShapeError("first frame must be 96x96 single channel");
  if (static_cast<int>(speech.window) != g->config().chunk_samples)
    throw ShapeError(fmt::format("speech chunks have {} samples, generator expects {}", speech.window,
                                 g->config().chunk_samples));
  rotations.validate();
  torch::NoGradGuard guard;
  g->eval();
  auto first = torch::from_blob(const_cast<std::uint8_t*>(first_frame.data()), {1, 1, media::kFrameSize, media::kFrameSize},
                                torch::kUInt8)
                   .to(torch::kFloat32)
                   .div(255.0);
  auto frames = g->forward(first, nn::chunks_to_tensor(speech).unsqueeze(0), nn::rotations_to_tensor(rotations).unsqueeze(0));
  return nn::tensor_to_clip(frames[0], fps);
}

media::VideoClip generate(Generator& g, const media::Image& first_frame, const media::SpeechChunks& speech,
                          const media::RotationSequence& rotations, float fps) {
  if (first_frame.channels != 1 || first_frame.width != media::kFrameSize || first_frame.height != media::kFrameSize)
    throw ShapeError("first frame must be 96x96 single channel");
  return generate(g, std::span<const std::uint8_t>(first_frame.pixels), speech, rotations, fps);
}

Generator load_generator(const nn::Checkpoint& ckpt) {
  if (ckpt.meta.value("kind", "") != "lam") throw FormatError("checkpoint does not hold a lip animation model");
  Generator g(LamModelConfig::from_json(ckpt.meta.at("model")));
  nn::restore_module(ckpt, "g.", *g);
  g->eval();
  return g;
}

Generator load_generator(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path))
    throw MissingArtifactError(fmt::format("generator {} not found; produce it with `svsr train-lam`", path.string()));
  return load_generator(nn::load_checkpoint(path));
}

}  // namespace svsr::lipgen
