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
#include <string>
#include <vector>

#include "svsr/common/rng.hpp"
#include "svsr/lipgen/networks.hpp"
#include "svsr/media/clip.hpp"
#include "svsr/media/image.hpp"
#include "svsr/media/manifest.hpp"
#include "svsr/media/wav.hpp"

namespace svsr::synth {

struct SynthJob {
  std::filesystem::path generator;        // lip animation checkpoint
  std::filesystem::path speech_manifest;  // D_s: audio + transcript
  std::filesystem::path face_manifest;    // D_f: images
  int faces_per_clip = 1;
  std::filesystem::path out_dir;
  std::uint64_t seed = 0;
  double max_seconds = 0.0;          // drop longer speech; 0 keeps everything
  double max_fail_fraction = 0.1;    // job fails above this fraction of failed clips
  float fps = 25.0f;

  void validate() const;
};

/// Uniform index into a face pool of `pool_size` entries.
std::size_t sample_face(std::size_t pool_size, Rng& rng);

/// Face index for every replica of speech clip `speech_index`. Replicas draw
/// distinct faces while the pool allows it; the result depends only on
/// (seed, speech_index, replicas, pool_size).
std::vector<std::size_t> assign_faces(std::uint64_t seed, std::size_t speech_index, int replicas,
                                      std::size_t pool_size);

/// 96x96 gray lip image for a D_f entry: the bbox region (whole image when
/// absent), converted to luma and resized.
media::Image load_face(const media::Manifest& faces, const media::ManifestEntry& entry);

/// Chunks the speech and runs the generator with identity rotations.
media::VideoClip synthesize_clip(lipgen::Generator& g, const media::Waveform& speech, const media::Image& face,
                                 float fps = 25.0f);

struct SynthReport {
  media::Manifest manifest;  // D_synth
  std::size_t generated = 0;
  std::size_t reused = 0;
  std::size_t failed = 0;
  std::size_t filtered = 0;  // speech clips dropped by the duration filter
  std::filesystem::path manifest_path;
};

/// Materialises D_synth under job.out_dir: clips/*.svsr, synth.jsonl,
/// progress.jsonl (content hashes used for resuming) and errors.jsonl.
SynthReport build_synth_dataset(const SynthJob& job);

}  // namespace svsr::synth
