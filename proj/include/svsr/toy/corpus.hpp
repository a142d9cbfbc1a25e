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

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "svsr/media/clip.hpp"
#include "svsr/media/image.hpp"
#include "svsr/media/wav.hpp"

namespace svsr::toy {

// Synthetic talking-mouth corpus with a 20-word lexicon. Every word has its
// own duration, mouth opening, mouth width and voice pitch, so both the
// video and the audio identify it.

inline constexpr std::array<const char*, 20> kLexicon = {"red",  "green", "blue", "black", "white", "one",  "two",
                                                         "three", "four", "five", "cat",   "dog",   "bird", "fish",
                                                         "tree", "run",  "jump", "stop",  "go",    "home"};

struct WordShape {
  int frames;
  double openness;  // peak opening in [0, 1]
  double width;     // relative mouth width
  double pitch_hz;
};
WordShape word_shape(int word);

struct Utterance {
  std::string id;
  std::vector<int> words;
  int speaker = 0;
  std::string transcript() const;
  /// Frames including lead-in, gaps and tail.
  int num_frames() const;
  /// Per-frame mouth opening and width.
  std::vector<std::pair<double, double>> mouth_track() const;
};

inline constexpr int kLeadFrames = 2;
inline constexpr int kGapFrames = 2;
inline constexpr int kNumSpeakers = 4;

/// `count` utterances of min_words..max_words words; the first utterances
/// cycle through the lexicon so every word occurs.
std::vector<Utterance> make_script(const std::string& prefix, int count, int min_words, int max_words,
                                   std::uint64_t seed);

/// 96x96 gray mouth-region clip.
media::VideoClip render_clip(const Utterance& u, float fps = 25.0f);
/// 16 kHz speech, exactly num_frames * sample_rate / fps samples.
media::Waveform render_audio(const Utterance& u, float fps = 25.0f);
/// Closed-mouth 96x96 gray lip image of a speaker.
media::Image render_face(int speaker);

/// Raw RGB frame of size x size with the mouth at `raw_mouth_box(size)`.
media::Image render_raw_frame(int speaker, double openness, double width, int size);
media::BBox raw_mouth_box(int size);

struct CorpusOptions {
  int train_utterances = 20;
  int speech_utterances = 10;
  int test_utterances = 5;
  int faces = 4;
  int min_words = 3;
  int max_words = 5;
  int raw_size = 128;
  std::uint64_t seed = 0;
};

/// Writes raw frame directories, WAV files, face PNGs and the manifests
/// raw_train.jsonl, raw_test.jsonl (frame dirs + bbox + audio + transcript),
/// speech.jsonl and faces.jsonl under `dir`.
void write_corpus(const std::filesystem::path& dir, const CorpusOptions& options);

}  // namespace svsr::toy
