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
#include <span>
#include <vector>

#include "svsr/common/error.hpp"

namespace svsr::media {

inline constexpr int kFrameSize = 96;
inline constexpr float kDefaultFps = 25.0f;

/// Fixed-rate sequence of single-channel 8-bit frames, row-major, frame-major.
struct VideoClip {
  std::uint32_t num_frames = 0;
  std::uint16_t height = kFrameSize;
  std::uint16_t width = kFrameSize;
  float fps = kDefaultFps;
  std::vector<std::uint8_t> pixels;

  static VideoClip blank(std::uint32_t frames, std::uint8_t value = 0, float fps = kDefaultFps);

  std::size_t frame_bytes() const { return static_cast<std::size_t>(height) * width; }
  std::span<const std::uint8_t> frame(std::size_t t) const {
    return {pixels.data() + t * frame_bytes(), frame_bytes()};
  }
  std::span<std::uint8_t> frame(std::size_t t) {
    return {pixels.data() + t * frame_bytes(), frame_bytes()};
  }

  /// Enforces the shared input space: T >= 1, 96x96, fps > 0, payload size.
  void validate() const;

  friend bool operator==(const VideoClip&, const VideoClip&) = default;
};

/// Container parsing failure; reason() distinguishes the cases.
class ClipFormatError : public FormatError {
 public:
  enum class Reason { bad_magic, truncated, bad_header };
  ClipFormatError(Reason reason, const std::string& what) : FormatError(what), reason_(reason) {}
  Reason reason() const noexcept { return reason_; }

 private:
  Reason reason_;
};

// Container layout (little endian):
//   "SVSR" | u32 frames | u16 height | u16 width | u8 channels (=1) | f32 fps
//   followed by frames*height*width raw bytes.
inline constexpr std::size_t kClipHeaderBytes = 4 + 4 + 2 + 2 + 1 + 4;

std::vector<std::uint8_t> encode_clip(const VideoClip& clip);
VideoClip decode_clip(std::span<const std::uint8_t> bytes);

void write_clip(const VideoClip& clip, const std::filesystem::path& path);
VideoClip read_clip(const std::filesystem::path& path);

}  // namespace svsr::media
