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
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "svsr/eval/evaluate.hpp"
#include "svsr/lipgen/networks.hpp"
#include "svsr/media/manifest.hpp"

namespace svsr::eval {

struct MismatchCell {
  std::string model;  // "real-only" or "real+synth"
  std::string test;   // "real" or "synthetic"
  double wer = 0.0;
  std::int64_t errors = 0;
  std::int64_t ref_words = 0;
  std::int64_t utterances = 0;
  friend bool operator==(const MismatchCell&, const MismatchCell&) = default;
};

/// Cells in row-major order: (real-only, real), (real-only, synthetic),
/// (real+synth, real), (real+synth, synthetic).
struct MismatchReport {
  std::vector<MismatchCell> cells;
  std::vector<std::string> excluded;  // utterances dropped from both test sets
  std::filesystem::path synthetic_manifest;

  bool complete() const { return cells.size() == 4; }
  const MismatchCell* find(const std::string& model, const std::string& test) const;
  nlohmann::ordered_json to_json() const;
};

/// Produces the synthetic counterpart of a real test clip from its audio and
/// first frame.
using TestSynthesizer =
    std::function<media::VideoClip(const media::ManifestEntry& entry, const media::VideoClip& real_clip)>;

/// Generator-backed synthesizer: speech of the entry plus the first real frame.
TestSynthesizer generator_synthesizer(lipgen::Generator& g, const media::Manifest& test);

/// Builds the synthetic test set under out_dir/synth_test (clips + manifest),
/// excludes utterances whose generation failed from both variants and fills
/// the 2x2 grid.
MismatchReport mismatch_assessment(Transcriber& model_real, Transcriber& model_mix, const media::Manifest& real_test,
                                   const TestSynthesizer& synthesize, const std::filesystem::path& out_dir);

}  // namespace svsr::eval
