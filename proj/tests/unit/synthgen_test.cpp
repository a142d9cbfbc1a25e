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

#include <set>

#include <gtest/gtest.h>

#include "helpers.hpp"
#include "standins.hpp"
#include "svsr/common/error.hpp"
#include "svsr/media/clip.hpp"
#include "svsr/media/wav.hpp"
#include "svsr/nn/checkpoint.hpp"
#include "svsr/synth/synthgen.hpp"

namespace svsr::synth {
namespace {

lipgen::LamModelConfig micro_lam() {
  lipgen::LamModelConfig c;
  c.width = 0.0625;
  c.decoder_convs_per_level = 1;
  return c;
}

lipgen::Generator micro_generator() {
  torch::manual_seed(9);
  return lipgen::Generator(micro_lam());
}

// Toy corpus plus an untrained generator checkpoint.
struct SynthFixture {
  svsr::testing::TempDir dir;
  SynthJob job;

  explicit SynthFixture(int speech = 3, int faces = 4) {
    toy::CorpusOptions o;
    o.train_utterances = 1;
    o.test_utterances = 1;
    o.speech_utterances = speech;
    o.faces = faces;
    o.min_words = 1;
    o.max_words = 1;
    o.raw_size = 64;
    toy::write_corpus(dir / "corpus", o);
    lipgen::LamTrainOptions lo;
    lo.window = 4;
    lipgen::LamTrainer t(micro_lam(), lipgen::LamLossWeights::preset("baseline"), lo,
                         svsr::testing::toy_lam_samples(1, 1));
    nn::save_checkpoint(t.checkpoint(), dir / "lam.ckpt");
    job.generator = dir / "lam.ckpt";
    job.speech_manifest = dir / "corpus" / "speech.jsonl";
    job.face_manifest = dir / "corpus" / "faces.jsonl";
    job.out_dir = dir / "synth";
    job.seed = 5;
  }
};

TEST(SampleFace, SingletonPoolAndEmptyPool) {
  auto rng = make_rng({1});
  for (int i = 0; i < 20; ++i) EXPECT_EQ(sample_face(1, rng), 0u);
  EXPECT_THROW(sample_face(0, rng), DataError);
}

TEST(SampleFace, DeterministicPerSeed) {
  auto a = make_rng({42}), b = make_rng({42});
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_face(17, a), sample_face(17, b));
}

TEST(SampleFace, UniformWithinThreeSigma) {
  auto rng = make_rng({7});
  const int draws = 10000, pool = 4;
  std::vector<int> counts(pool);
  for (int i = 0; i < draws; ++i) ++counts[sample_face(pool, rng)];
  const double mean = draws / static_cast<double>(pool);
  const double sigma = std::sqrt(draws * 0.25 * 0.75);
  for (int c : counts) EXPECT_LE(std::fabs(c - mean), 3 * sigma) << c;
}

TEST(AssignFaces, DistinctWhilePoolAllowsAndStable) {
  for (std::size_t s = 0; s < 30; ++s) {
    const auto f = assign_faces(3, s, 4, 6);
    EXPECT_EQ(std::set<std::size_t>(f.begin(), f.end()).size(), 4u);
    EXPECT_EQ(f, assign_faces(3, s, 4, 6));
    const auto wrap = assign_faces(3, s, 5, 2);
    EXPECT_EQ(wrap.size(), 5u);
    EXPECT_NE(wrap[0], wrap[1]);
    EXPECT_NE(wrap[2], wrap[3]);
  }
}

TEST(SynthesizeClip, FrameCountFromDuration) {
  auto g = micro_generator();
  const auto face = toy::render_face(0);
  media::Waveform three_s, fifth_s;
  three_s.samples.assign(48000, 0.01f);
  fifth_s.samples.assign(3200, 0.01f);
  EXPECT_EQ(synthesize_clip(g, three_s, face).num_frames, 75u);
  EXPECT_EQ(synthesize_clip(g, fifth_s, face).num_frames, 5u);
}

TEST(SynthesizeClip, IdenticalBytesForIdenticalInputs) {
  auto g = micro_generator();
  const auto face = toy::render_face(1);
  media::Waveform w;
  w.samples.resize(16000);
  for (std::size_t i = 0; i < w.samples.size(); ++i) w.samples[i] = 0.3f * std::sin(0.05f * i);
  svsr::testing::TempDir tmp;
  media::write_clip(synthesize_clip(g, w, face), tmp / "a.svsr");
  media::write_clip(synthesize_clip(g, w, face), tmp / "b.svsr");
  EXPECT_EQ(svsr::testing::read_bytes(tmp / "a.svsr"), svsr::testing::read_bytes(tmp / "b.svsr"));
}

TEST(BuildSynth, ReplicaCountsFacesAndTranscripts) {
  SynthFixture fx(3, 4);
  const auto speech = media::Manifest::load(fx.job.speech_manifest);
  for (int n : {1, 2}) {
    fx.job.faces_per_clip = n;
    fx.job.out_dir = fx.dir / ("synth" + std::to_string(n));
    const auto r = build_synth_dataset(fx.job);
    EXPECT_EQ(r.manifest.size(), n * speech.size());
    EXPECT_EQ(r.generated, n * speech.size());
    EXPECT_EQ(r.failed, 0u);
    std::map<std::string, std::set<std::string>> faces_of;
    for (const auto& e : r.manifest.entries()) {
      const auto src = speech.find(e.meta.at("speech_id").get<std::string>());
      ASSERT_NE(src, nullptr);
      EXPECT_EQ(e.transcript, src->transcript);
      faces_of[src->id].insert(e.meta.at("face_id").get<std::string>());
      const auto clip = media::read_clip(r.manifest.resolve(*e.video_path));
      const auto audio = media::load_wav(speech.resolve(*src->audio_path));
      EXPECT_EQ(clip.num_frames, audio.samples.size() / 640);
    }
    for (const auto& [id, f] : faces_of) EXPECT_EQ(f.size(), static_cast<std::size_t>(n)) << id;
    const auto reread = media::Manifest::load(r.manifest_path);
    EXPECT_EQ(reread.count(media::DatasetRole::synthetic), reread.size());
  }
}

TEST(BuildSynth, DeterministicAndResumable) {
  SynthFixture fx(2, 3);
  fx.job.faces_per_clip = 2;
  const auto first = build_synth_dataset(fx.job);
  std::map<std::string, std::vector<std::uint8_t>> bytes;
  for (const auto& e : first.manifest.entries())
    bytes[e.id] = svsr::testing::read_bytes(first.manifest.resolve(*e.video_path));

  const auto again = build_synth_dataset(fx.job);
  EXPECT_EQ(again.generated, 0u);
  EXPECT_EQ(again.reused, first.manifest.size());

  auto fresh = fx.job;
  fresh.out_dir = fx.dir / "elsewhere";
  const auto other = build_synth_dataset(fresh);
  ASSERT_EQ(other.manifest.size(), first.manifest.size());
  for (const auto& e : other.manifest.entries())
    EXPECT_EQ(svsr::testing::read_bytes(other.manifest.resolve(*e.video_path)), bytes.at(e.id)) << e.id;
}

TEST(BuildSynth, DurationFilterAndJobValidation) {
  SynthFixture fx(2, 2);
  fx.job.max_seconds = 0.01;
  const auto r = build_synth_dataset(fx.job);
  EXPECT_EQ(r.filtered, 2u);
  EXPECT_TRUE(r.manifest.empty());
  fx.job.faces_per_clip = 0;
  EXPECT_THROW(fx.job.validate(), ConfigError);
}

}  // namespace
}  // namespace svsr::synth
