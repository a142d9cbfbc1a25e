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

#include "svsr/trainer/augment.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "svsr/common/error.hpp"
#include "svsr/media/image.hpp"

namespace svsr::trainer {

AugmentPolicy AugmentPolicy::none() {
  AugmentPolicy p;
  p.hflip_prob = 0.0;
  p.random_crop = false;
  p.max_masks = 0;
  p.max_mask_fraction = 0.0;
  return p;
}

void AugmentPolicy::validate() const {
  if (hflip_prob < 0.0 || hflip_prob > 1.0) throw ConfigError("hflip_prob must lie in [0, 1]");
  if (crop_size < 1 || crop_size > media::kFrameSize)
    throw ConfigError(fmt::format("crop_size={} must lie in [1, {}]", crop_size, media::kFrameSize));
  if (max_masks < 0) throw ConfigError("max_masks must be >= 0");
  if (max_mask_fraction < 0.0 || max_mask_fraction > 1.0) throw ConfigError("max_mask_fraction must lie in [0, 1]");
}

media::VideoClip hflip(const media::VideoClip& clip) {
  auto out = clip;
  const auto w = clip.width;
  for (std::size_t t = 0; t < clip.num_frames; ++t) {
    auto f = out.frame(t);
    for (std::size_t y = 0; y < clip.height; ++y) std::reverse(f.begin() + y * w, f.begin() + (y + 1) * w);
  }
  return out;
}

media::VideoClip crop_resize(const media::VideoClip& clip, int x, int y, int size) {
  if (x < 0 || y < 0 || x + size > clip.width || y + size > clip.height)
    throw ShapeError(fmt::format("crop {}x{} at ({}, {}) leaves the frame", size, size, x, y));
  auto out = clip;
  media::Image crop{size, size, 1, std::vector<std::uint8_t>(static_cast<std::size_t>(size) * size)};
  for (std::size_t t = 0; t < clip.num_frames; ++t) {
    const auto src = clip.frame(t);
    for (int r = 0; r < size; ++r)
      std::copy_n(src.begin() + (y + r) * clip.width + x, size, crop.pixels.begin() + r * size);
    const auto resized = media::resize_bilinear(crop, clip.width, clip.height);
    std::copy(resized.pixels.begin(), resized.pixels.end(), out.frame(t).begin());
  }
  return out;
}

media::VideoClip center_crop(const media::VideoClip& clip, int size) {
  return crop_resize(clip, (clip.width - size) / 2, (clip.height - size) / 2, size);
}

media::VideoClip apply_time_masks(const media::VideoClip& clip, const std::vector<std::pair<int, int>>& spans) {
  if (spans.empty()) return clip;
  const auto n = clip.frame_bytes();
  std::vector<double> sum(n, 0.0);
  for (std::size_t t = 0; t < clip.num_frames; ++t) {
    const auto f = clip.frame(t);
    for (std::size_t i = 0; i < n; ++i) sum[i] += f[i];
  }
  std::vector<std::uint8_t> mean(n);
  for (std::size_t i = 0; i < n; ++i)
    mean[i] = static_cast<std::uint8_t>(std::lround(sum[i] / static_cast<double>(clip.num_frames)));
  auto out = clip;
  for (const auto& [start, length] : spans) {
    if (start < 0 || length < 0 || start + length > static_cast<int>(clip.num_frames))
      throw ShapeError(fmt::format("time mask [{}, {}) outside clip of {} frames", start, start + length, clip.num_frames));
    for (int t = start; t < start + length; ++t) std::copy(mean.begin(), mean.end(), out.frame(static_cast<std::size_t>(t)).begin());
  }
  return out;
}

media::VideoClip augment(const media::VideoClip& clip, const AugmentPolicy& policy, Rng& rng) {
  clip.validate();
  auto out = clip;
  if (policy.random_crop && policy.crop_size < clip.width) {
    const auto range = static_cast<std::uint64_t>(clip.width - policy.crop_size + 1);
    const int x = static_cast<int>(uniform_index(rng, range));
    const int y = static_cast<int>(uniform_index(rng, range));
    out = crop_resize(out, x, y, policy.crop_size);
  }
  if (policy.hflip_prob > 0.0 && uniform01(rng) < policy.hflip_prob) out = hflip(out);
  const int frames = static_cast<int>(clip.num_frames);
  const int max_len = static_cast<int>(std::floor(policy.max_mask_fraction * frames));
  std::vector<std::pair<int, int>> spans;
  for (int m = 0; m < policy.max_masks && max_len > 0; ++m) {
    const int len = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(max_len + 1)));
    const int start = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(frames - len + 1)));
    if (len > 0) spans.emplace_back(start, len);
  }
  return apply_time_masks(out, spans);
}

media::VideoClip eval_transform(const media::VideoClip& clip, const AugmentPolicy& policy) {
  if (!policy.random_crop || policy.crop_size >= clip.width) return clip;
  return center_crop(clip, policy.crop_size);
}

}  // namespace svsr::trainer
