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

#include <cstddef>
#include <span>
#include <vector>

#include "svsr/media/wav.hpp"

namespace svsr::media {

struct ChunkingOptions {
  double window_ms = 200.0;
  double stride_ms = 40.0;
};

/// n x L matrix of overlapping speech windows, one row per video frame.
struct SpeechChunks {
  std::size_t count = 0;
  std::size_t window = 0;
  std::vector<float> samples;  // count * window, row-major

  std::span<const float> chunk(std::size_t i) const {
    return {samples.data() + i * window, window};
  }
  /// Rows [begin, begin + n) as a new matrix.
  SpeechChunks slice(std::size_t begin, std::size_t n) const;
};

/// Number of video frames a clip of `seconds` maps to: round(seconds * fps),
/// never less than one.
std::size_t frames_for_duration(double seconds, double fps);

/// Splits speech into one window per frame period. Chunk k is centred on
/// the midpoint of frame k's interval, (k + 0.5) * sample_rate / fps, and is
/// zero-padded where it extends past either end of the signal. Requires the
/// stride to equal the frame period.
SpeechChunks chunk_speech(const Waveform& wave, double fps, const ChunkingOptions& opts = {});

}  // namespace svsr::media
