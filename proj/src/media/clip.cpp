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

#include "svsr/media/clip.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include <fmt/format.h>

namespace svsr::media {

static_assert(std::endian::native == std::endian::little, "clip container assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'S', 'V', 'S', 'R'};

template <typename T>
void put(std::vector<std::uint8_t>& out, T v) {
  const auto* p = reinterpret_cast<const std::uint8_t*>(&v);
  out.insert(out.end(), p, p + sizeof(T));
}

template <typename T>
T get(const std::uint8_t* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

}  // namespace

VideoClip VideoClip::blank(std::uint32_t frames, std::uint8_t value, float fps) {
  VideoClip c;
  c.num_frames = frames;
  c.fps = fps;
  c.pixels.assign(static_cast<std::size_t>(frames) * kFrameSize * kFrameSize, value);
  return c;
}

void VideoClip::validate() const {
  if (num_frames < 1) throw ShapeError("video clip has no frames");
  if (height != kFrameSize || width != kFrameSize)
    throw ShapeError(fmt::format("video clip frames are {}x{}, expected {}x{}", height, width, kFrameSize, kFrameSize));
  if (!(fps > 0.0f) || !std::isfinite(fps)) throw ShapeError(fmt::format("video clip fps={} must be positive", fps));
  if (pixels.size() != num_frames * frame_bytes())
    throw ShapeError(fmt::format("video clip payload is {} bytes, expected {}", pixels.size(), num_frames * frame_bytes()));
}

std::vector<std::uint8_t> encode_clip(const VideoClip& clip) {
  if (clip.pixels.size() != clip.num_frames * clip.frame_bytes())
    throw ShapeError("clip payload size does not match its header");
  std::vector<std::uint8_t> out;
  out.reserve(kClipHeaderBytes + clip.pixels.size());
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  put<std::uint32_t>(out, clip.num_frames);
  put<std::uint16_t>(out, clip.height);
  put<std::uint16_t>(out, clip.width);
  put<std::uint8_t>(out, 1);
  put<float>(out, clip.fps);
  out.insert(out.end(), clip.pixels.begin(), clip.pixels.end());
  return out;
}

VideoClip decode_clip(std::span<const std::uint8_t> bytes) {
  using R = ClipFormatError::Reason;
  if (bytes.size() < sizeof(kMagic) || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
    throw ClipFormatError(R::bad_magic, "bad magic: not an SVSR clip container");
  if (bytes.size() < kClipHeaderBytes)
    throw ClipFormatError(R::truncated, fmt::format("truncated header: {} of {} bytes", bytes.size(), kClipHeaderBytes));
  const std::uint8_t* p = bytes.data() + 4;
  VideoClip c;
  c.num_frames = get<std::uint32_t>(p);
  c.height = get<std::uint16_t>(p + 4);
  c.width = get<std::uint16_t>(p + 6);
  const auto channels = get<std::uint8_t>(p + 8);
  c.fps = get<float>(p + 9);
  if (channels != 1) throw ClipFormatError(R::bad_header, fmt::format("channels={} unsupported", channels));
  const std::size_t payload = static_cast<std::size_t>(c.num_frames) * c.height * c.width;
  if (bytes.size() - kClipHeaderBytes < payload)
    throw ClipFormatError(R::truncated, fmt::format("truncated payload: {} of {} bytes", bytes.size() - kClipHeaderBytes, payload));
  if (bytes.size() - kClipHeaderBytes > payload)
    throw ClipFormatError(R::bad_header, "trailing bytes after clip payload");
  c.pixels.assign(bytes.begin() + kClipHeaderBytes, bytes.end());
  return c;
}

void write_clip(const VideoClip& clip, const std::filesystem::path& path) {
  const auto bytes = encode_clip(clip);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + path.string());
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("short write to " + path.string());
}

VideoClip read_clip(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  try {
    return decode_clip(bytes);
  } catch (const ClipFormatError& e) {
    throw ClipFormatError(e.reason(), path.string() + ": " + e.what());
  }
}

}  // namespace svsr::media
