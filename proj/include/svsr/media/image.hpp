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

#include <cstdint>
#include <filesystem>
#include <vector>

namespace svsr::media {

/// Interleaved 8-bit image; channels is 1 (gray) or 3 (RGB).
struct Image {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(int x, int y, int c = 0) const {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  friend bool operator==(const Image&, const Image&) = default;
};

/// Mouth bounding box in pixel coordinates of the source frame.
struct BBox {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;
  friend bool operator==(const BBox&, const BBox&) = default;
};

/// PNG/JPEG decode; colour images come back as RGB.
Image load_image(const std::filesystem::path& path);
void save_png(const std::filesystem::path& path, const Image& image);

/// ITU-R BT.601 luma; gray input is returned unchanged.
Image to_gray(const Image& image);

/// Bilinear resampling with pixel-centre alignment.
Image resize_bilinear(const Image& image, int width, int height);

/// Luma conversion, crop to `box`, bilinear resize to 96x96. Throws
/// DataError when the box is empty or leaves the frame.
Image crop_mouth(const Image& frame, const BBox& box);

}  // namespace svsr::media
