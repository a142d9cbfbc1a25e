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

#include "svsr/toy/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "svsr/common/error.hpp"
#include "svsr/common/rng.hpp"
#include "svsr/media/manifest.hpp"

namespace svsr::toy {

namespace fs = std::filesystem;

WordShape word_shape(int word) {
  if (word < 0 || word >= static_cast<int>(kLexicon.size())) throw DataError(fmt::format("word {} not in lexicon", word));
  return {3 + word % 3, 0.3 + 0.15 * (word % 5), 0.45 + 0.12 * ((word / 5) % 4), 200.0 + 40.0 * word};
}

std::string Utterance::transcript() const {
  std::string s;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0) s += ' ';
    s += kLexicon[static_cast<std::size_t>(words[i])];
  }
  return s;
}

int Utterance::num_frames() const {
  int n = 2 * kLeadFrames;
  for (std::size_t i = 0; i < words.size(); ++i) n += word_shape(words[i]).frames + (i > 0 ? kGapFrames : 0);
  return n;
}

namespace {

constexpr double kRestWidth = 0.5;

// Per-frame word index (-1 in silence) and position inside the word.
struct FrameInfo {
  int word = -1;
  int k = 0;
};

std::vector<FrameInfo> frame_layout(const Utterance& u) {
  std::vector<FrameInfo> out(static_cast<std::size_t>(kLeadFrames));
  for (std::size_t i = 0; i < u.words.size(); ++i) {
    if (i > 0) out.insert(out.end(), kGapFrames, FrameInfo{});
    const auto shape = word_shape(u.words[i]);
    for (int k = 0; k < shape.frames; ++k) out.push_back({u.words[i], k});
  }
  out.insert(out.end(), kLeadFrames, FrameInfo{});
  return out;
}

double envelope(int k, int frames) { return std::sin(std::numbers::pi * (k + 0.5) / frames); }

struct Palette {
  double skin[3];
  double lip[3];
};

Palette speaker_palette(int speaker) {
  const double t = static_cast<double>(speaker % kNumSpeakers) / kNumSpeakers;
  return {{200.0 - 60.0 * t, 160.0 - 50.0 * t, 130.0 - 40.0 * t}, {150.0 - 40.0 * t, 70.0, 75.0 + 10.0 * t}};
}

double smoothstep_inside(double dist, double sharpness) { return std::clamp((1.0 - dist) * sharpness + 0.5, 0.0, 1.0); }

// Colour of the mouth region at normalised coordinates (u, v) in [-1, 1].
std::array<double, 3> mouth_pixel(const Palette& p, double u, double v, double openness, double width) {
  std::array<double, 3> c{p.skin[0] + 12.0 * v, p.skin[1] + 12.0 * v, p.skin[2] + 12.0 * v};
  const double rx = 0.3 + 0.5 * width;
  const double ry = 0.16 + 0.36 * openness;
  const double cy = 0.1;
  const double d_outer = std::hypot(u / rx, (v - cy) / ry);
  const double a_lip = smoothstep_inside(d_outer, 6.0);
  for (int ch = 0; ch < 3; ++ch) c[ch] = (1 - a_lip) * c[ch] + a_lip * p.lip[ch];
  const double rxi = rx * 0.78;
  const double ryi = 0.015 + 0.3 * openness;
  const double d_inner = std::hypot(u / rxi, (v - cy) / ryi);
  const double a_in = smoothstep_inside(d_inner, 6.0) * std::min(1.0, openness * 4.0);
  for (int ch = 0; ch < 3; ++ch) c[ch] = (1 - a_in) * c[ch] + a_in * 25.0;
  return c;
}

std::uint8_t to_byte(double x) { return static_cast<std::uint8_t>(std::clamp(std::lround(x), 0L, 255L)); }

}  // namespace

std::vector<std::pair<double, double>> Utterance::mouth_track() const {
  std::vector<std::pair<double, double>> out;
  for (const auto& f : frame_layout(*this)) {
    if (f.word < 0) {
      out.emplace_back(0.0, kRestWidth);
      continue;
    }
    const auto s = word_shape(f.word);
    out.emplace_back(s.openness * envelope(f.k, s.frames), s.width);
  }
  return out;
}

std::vector<Utterance> make_script(const std::string& prefix, int count, int min_words, int max_words,
                                   std::uint64_t seed) {
  if (count < 0 || min_words < 1 || max_words < min_words) throw ConfigError("invalid toy script parameters");
  auto rng = make_rng({seed, 0x70ffULL});
  std::vector<Utterance> out;
  int cursor = 0;
  const int lexicon = static_cast<int>(kLexicon.size());
  for (int i = 0; i < count; ++i) {
    Utterance u;
    u.id = fmt::format("{}{:03d}", prefix, i);
    u.speaker = i % kNumSpeakers;
    const int n = min_words + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(max_words - min_words + 1)));
    for (int w = 0; w < n; ++w) {
      if (cursor < lexicon)
        u.words.push_back(cursor++);
      else
        u.words.push_back(static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(lexicon))));
    }
    out.push_back(std::move(u));
  }
  return out;
}

media::VideoClip render_clip(const Utterance& u, float fps) {
  const auto track = u.mouth_track();
  media::VideoClip clip;
  clip.num_frames = static_cast<std::uint32_t>(track.size());
  clip.fps = fps;
  clip.pixels.resize(track.size() * clip.frame_bytes());
  const auto pal = speaker_palette(u.speaker);
  const int n = media::kFrameSize;
  for (std::size_t t = 0; t < track.size(); ++t) {
    auto f = clip.frame(t);
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) {
        const auto c = mouth_pixel(pal, (x + 0.5) / n * 2 - 1, (y + 0.5) / n * 2 - 1, track[t].first, track[t].second);
        f[static_cast<std::size_t>(y * n + x)] = to_byte(0.299 * c[0] + 0.587 * c[1] + 0.114 * c[2]);
      }
  }
  return clip;
}

media::Waveform render_audio(const Utterance& u, float fps) {
  media::Waveform w;
  const int per_frame = static_cast<int>(std::lround(w.sample_rate / fps));
  const auto layout = frame_layout(u);
  w.samples.assign(layout.size() * static_cast<std::size_t>(per_frame), 0.0f);
  for (std::size_t t = 0; t < layout.size(); ++t) {
    if (layout[t].word < 0) continue;
    const auto s = word_shape(layout[t].word);
    for (int i = 0; i < per_frame; ++i) {
      const double k = layout[t].k + (i + 0.5) / per_frame;
      const double env = 0.3 * (0.4 + 0.6 * s.openness) * std::sin(std::numbers::pi * k / s.frames);
      const double time = static_cast<double>(t * per_frame + i) / w.sample_rate;
      const double tone = std::sin(2 * std::numbers::pi * s.pitch_hz * time) +
                          0.5 * std::sin(4 * std::numbers::pi * s.pitch_hz * time);
      w.samples[t * per_frame + i] = static_cast<float>(env * tone / 1.5);
    }
  }
  return w;
}

media::Image render_face(int speaker) {
  const auto pal = speaker_palette(speaker);
  const int n = media::kFrameSize;
  media::Image img{n, n, 1, std::vector<std::uint8_t>(static_cast<std::size_t>(n * n))};
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      const auto c = mouth_pixel(pal, (x + 0.5) / n * 2 - 1, (y + 0.5) / n * 2 - 1, 0.0, kRestWidth);
      img.pixels[static_cast<std::size_t>(y * n + x)] = to_byte(0.299 * c[0] + 0.587 * c[1] + 0.114 * c[2]);
    }
  return img;
}

media::BBox raw_mouth_box(int size) {
  const int side = size * 5 / 8;
  return {(size - side) / 2, size - side - size / 16, side, side};
}

media::Image render_raw_frame(int speaker, double openness, double width, int size) {
  const auto box = raw_mouth_box(size);
  const auto pal = speaker_palette(speaker);
  media::Image img{size, size, 3, std::vector<std::uint8_t>(static_cast<std::size_t>(size * size * 3))};
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const double u = (x + 0.5 - box.x) / box.width * 2 - 1;
      const double v = (y + 0.5 - box.y) / box.height * 2 - 1;
      auto c = mouth_pixel(pal, u, v, openness, width);
      // Eyes above the mouth region.
      for (double ex : {-0.9, 0.9})
        if (std::hypot(u - ex, v + 1.9) < 0.25) c = {40.0, 40.0, 50.0};
      for (int ch = 0; ch < 3; ++ch) img.pixels[static_cast<std::size_t>((y * size + x) * 3 + ch)] = to_byte(c[ch]);
    }
  return img;
}

namespace {

void write_raw_set(const fs::path& dir, const std::string& name, const std::vector<Utterance>& utts, int raw_size) {
  media::Manifest m(dir);
  for (const auto& u : utts) {
    const auto frame_dir = fs::path("raw") / u.id;
    fs::create_directories(dir / frame_dir);
    const auto track = u.mouth_track();
    for (std::size_t t = 0; t < track.size(); ++t)
      media::save_png(dir / frame_dir / fmt::format("frame_{:05d}.png", t),
                      render_raw_frame(u.speaker, track[t].first, track[t].second, raw_size));
    const auto wav = fs::path("audio") / (u.id + ".wav");
    media::save_wav(dir / wav, render_audio(u));
    media::ManifestEntry e;
    e.id = u.id;
    e.video_path = frame_dir;
    e.audio_path = wav;
    e.transcript = u.transcript();
    e.bbox = raw_mouth_box(raw_size);
    e.split = name;
    e.meta["speaker"] = u.speaker;
    m.add(std::move(e));
  }
  m.save(dir / fmt::format("raw_{}.jsonl", name));
}

}  // namespace

void write_corpus(const fs::path& dir, const CorpusOptions& o) {
  fs::create_directories(dir / "audio");
  fs::create_directories(dir / "faces");
  write_raw_set(dir, "train", make_script("train", o.train_utterances, o.min_words, o.max_words, o.seed), o.raw_size);
  write_raw_set(dir, "test", make_script("test", o.test_utterances, o.min_words, o.max_words, o.seed + 1), o.raw_size);

  media::Manifest speech(dir);
  for (auto& u : make_script("speech", o.speech_utterances, o.min_words, o.max_words, o.seed + 2)) {
    const auto wav = fs::path("audio") / (u.id + ".wav");
    media::save_wav(dir / wav, render_audio(u));
    media::ManifestEntry e;
    e.id = u.id;
    e.audio_path = wav;
    e.transcript = u.transcript();
    speech.add(std::move(e));
  }
  speech.save(dir / "speech.jsonl");

  media::Manifest faces(dir);
  for (int f = 0; f < o.faces; ++f) {
    const auto png = fs::path("faces") / fmt::format("face{:02d}.png", f);
    media::save_png(dir / png, render_raw_frame(f, 0.0, kRestWidth, o.raw_size));
    media::ManifestEntry e;
    e.id = fmt::format("face{:02d}", f);
    e.image_path = png;
    e.bbox = raw_mouth_box(o.raw_size);
    faces.add(std::move(e));
  }
  faces.save(dir / "faces.jsonl");
}

}  // namespace svsr::toy
