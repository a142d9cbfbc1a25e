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

#include <filesystem>
#include <vector>

namespace svsr::media {

inline constexpr int kDefaultSampleRate = 16000;

/// Mono speech signal with amplitudes in [-1, 1].
struct Waveform {
  std::vector<float> samples;
  int sample_rate = kDefaultSampleRate;

  double duration_seconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
  /// Throws DataError unless sample_rate > 0 and every sample is finite
  /// with magnitude at most one.
  void validate() const;
};

/// Reads a 16-bit PCM mono RIFF/WAVE file. Samples are divided by 32768, so
/// the full int16 range maps onto [-1, 32767/32768].
Waveform load_wav(const std::filesystem::path& path);

/// Parses an in-memory WAVE image; `origin` is used in error messages.
Waveform parse_wav(const std::vector<std::uint8_t>& bytes, const std::string& origin = "<memory>");

/// Writes 16-bit PCM mono. Samples are scaled by 32768, rounded and clamped
/// to the int16 range, which makes load_wav(save_wav(w)) exact for waveforms
/// produced by load_wav.
void save_wav(const std::filesystem::path& path, const Waveform& wave);

}  // namespace svsr::media
