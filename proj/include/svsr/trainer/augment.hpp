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

#include <utility>
#include <vector>

#include "svsr/common/rng.hpp"
#include "svsr/media/clip.hpp"

namespace svsr::trainer {

struct AugmentPolicy {
  double hflip_prob = 0.5;
  bool random_crop = true;
  int crop_size = 88;  // cropped from 96x96 and resized back
  int max_masks = 1;
  double max_mask_fraction = 0.4;  // of T, per mask

  static AugmentPolicy none();
  void validate() const;
};

media::VideoClip hflip(const media::VideoClip& clip);
/// Crops size x size at (x, y) from every frame and resizes back to 96x96.
media::VideoClip crop_resize(const media::VideoClip& clip, int x, int y, int size);
media::VideoClip center_crop(const media::VideoClip& clip, int size);
/// Replaces frames [start, start + length) of each span with the rounded
/// per-pixel mean frame of the unmasked input clip.
media::VideoClip apply_time_masks(const media::VideoClip& clip, const std::vector<std::pair<int, int>>& spans);

/// Random crop, then horizontal flip, then time masking; T, H and W are preserved.
media::VideoClip augment(const media::VideoClip& clip, const AugmentPolicy& policy, Rng& rng);

/// Evaluation-time transform: centre crop resized back when random cropping is used in training.
media::VideoClip eval_transform(const media::VideoClip& clip, const AugmentPolicy& policy);

}  // namespace svsr::trainer
