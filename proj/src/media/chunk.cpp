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

#include "svsr/media/chunk.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "svsr/common/error.hpp"

namespace svsr::media {

std::size_t frames_for_duration(double seconds, double fps) {
  const auto n = static_cast<long long>(std::llround(seconds * fps));
  return static_cast<std::size_t>(std::max<long long>(1, n));
}

SpeechChunks SpeechChunks::slice(std::size_t begin, std::size_t n) const {
  if (begin + n > count) throw ShapeError(fmt::format("chunk slice [{}, {}) exceeds {} chunks", begin, begin + n, count));
  SpeechChunks out;
  out.count = n;
  out.window = window;
  out.samples.assign(samples.begin() + static_cast<std::ptrdiff_t>(begin * window),
                     samples.begin() + static_cast<std::ptrdiff_t>((begin + n) * window));
  return out;
}

SpeechChunks chunk_speech(const Waveform& wave, double fps, const ChunkingOptions& opts) {
  if (wave.samples.empty()) throw DataError("cannot chunk an empty waveform");
  if (!(fps > 0.0)) throw ConfigError(fmt::format("fps={} must be positive", fps));
  if (std::fabs(fps * opts.stride_ms - 1000.0) > 1e-6)
    throw ConfigError(fmt::format("stride {} ms does not match the frame period of {} fps", opts.stride_ms, fps));

  const double sr = wave.sample_rate;
  const auto window = static_cast<std::size_t>(std::llround(opts.window_ms * sr / 1000.0));
  const double hop = sr / fps;
  const std::size_t n = frames_for_duration(wave.duration_seconds(), fps);
  const auto total = static_cast<long long>(wave.samples.size());

  SpeechChunks out;
  out.count = n;
  out.window = window;
  out.samples.assign(n * window, 0.0f);
  for (std::size_t k = 0; k < n; ++k) {
    const auto centre = static_cast<long long>(std::floor((static_cast<double>(k) + 0.5) * hop));
    const long long start = centre - static_cast<long long>(window / 2);
    const long long lo = std::max<long long>(start, 0);
    const long long hi = std::min<long long>(start + static_cast<long long>(window), total);
    float* dst = out.samples.data() + k * window;
    for (long long i = lo; i < hi; ++i) dst[i - start] = wave.samples[static_cast<std::size_t>(i)];
  }
  return out;
}

}  // namespace svsr::media
