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

#include "svsr/nn/tensors.hpp"

#include <algorithm>

#include "svsr/common/error.hpp"

namespace svsr::nn {

torch::Tensor clip_to_tensor(const media::VideoClip& clip) {
  clip.validate();
  auto t = torch::from_blob(const_cast<std::uint8_t*>(clip.pixels.data()),
                            {static_cast<std::int64_t>(clip.num_frames), clip.height, clip.width}, torch::kUInt8);
  return t.to(torch::kFloat32).div_(255.0);
}

torch::Tensor image_to_tensor(const media::Image& gray) {
  if (gray.channels != 1 || gray.width != media::kFrameSize || gray.height != media::kFrameSize)
    throw ShapeError("expected a 96x96 single-channel image");
  auto t = torch::from_blob(const_cast<std::uint8_t*>(gray.pixels.data()), {gray.height, gray.width}, torch::kUInt8);
  return t.to(torch::kFloat32).div_(255.0);
}

media::VideoClip tensor_to_clip(const torch::Tensor& frames, float fps) {
  if (frames.dim() != 3 || frames.size(1) != media::kFrameSize || frames.size(2) != media::kFrameSize)
    throw ShapeError("expected frames [T, 96, 96]");
  auto q = frames.detach().to(torch::kFloat32).clamp(0.0, 1.0).mul(255.0).round().to(torch::kUInt8).contiguous();
  media::VideoClip c;
  c.num_frames = static_cast<std::uint32_t>(frames.size(0));
  c.fps = fps;
  c.pixels.assign(q.data_ptr<std::uint8_t>(), q.data_ptr<std::uint8_t>() + q.numel());
  return c;
}

torch::Tensor chunks_to_tensor(const media::SpeechChunks& chunks) {
  return torch::from_blob(const_cast<float*>(chunks.samples.data()),
                          {static_cast<std::int64_t>(chunks.count), static_cast<std::int64_t>(chunks.window)},
                          torch::kFloat32)
      .clone();
}

torch::Tensor rotations_to_tensor(const media::RotationSequence& rots) {
  auto t = torch::empty({static_cast<std::int64_t>(rots.size()), 9}, torch::kFloat32);
  auto a = t.accessor<float, 2>();
  for (std::size_t i = 0; i < rots.size(); ++i)
    for (int j = 0; j < 9; ++j) a[static_cast<std::int64_t>(i)][j] = static_cast<float>(rots.matrices[i][j]);
  return t;
}

std::pair<torch::Tensor, torch::Tensor> pad_clips(std::span<const media::VideoClip* const> clips) {
  if (clips.empty()) throw ShapeError("cannot pad an empty clip batch");
  std::int64_t t_max = 0;
  for (const auto* c : clips) t_max = std::max<std::int64_t>(t_max, c->num_frames);
  auto out = torch::zeros({static_cast<std::int64_t>(clips.size()), t_max, media::kFrameSize, media::kFrameSize});
  auto lengths = torch::empty({static_cast<std::int64_t>(clips.size())}, torch::kInt64);
  for (std::size_t i = 0; i < clips.size(); ++i) {
    const auto n = static_cast<std::int64_t>(clips[i]->num_frames);
    out[static_cast<std::int64_t>(i)].slice(0, 0, n).copy_(clip_to_tensor(*clips[i]));
    lengths[static_cast<std::int64_t>(i)] = n;
  }
  return {out, lengths};
}

}  // namespace svsr::nn
