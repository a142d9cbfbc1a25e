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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "svsr/bridge/perceptual.hpp"
#include "svsr/lipgen/config.hpp"
#include "svsr/lipgen/networks.hpp"
#include "svsr/media/chunk.hpp"
#include "svsr/media/clip.hpp"
#include "svsr/media/manifest.hpp"
#include "svsr/nn/checkpoint.hpp"
#include "svsr/tokenizer/bpe.hpp"

namespace svsr::lipgen {

struct LamSample {
  std::string id;
  media::VideoClip video;
  media::SpeechChunks chunks;  // exactly one per frame
  std::vector<int> tokens;     // empty unless a transcript was available
};

/// Loads video + audio pairs. Throws DataError when an entry's chunk count
/// differs from its frame count. Transcripts are tokenised when `vocab` is given.
std::vector<LamSample> load_lam_samples(const media::Manifest& manifest, const tokenizer::Vocab* vocab);

struct LamTrainOptions {
  std::int64_t steps = 1000;
  std::int64_t window = 75;       // frames per training clip; whole clip when the recognizer is used
  std::int64_t disc_frames = 4;   // frames drawn by S(v) per step
  double lr_generator = 1e-4;
  double lr_frame_disc = 1e-4;
  double lr_seq_disc = 1e-5;
  std::uint64_t seed = 0;
  /// Steps per checkpoint; 0 means one epoch (one step per clip).
  std::int64_t checkpoint_every = 0;
};

struct LamStepStats {
  std::int64_t step = 0;
  double d_img = 0.0, d_seq = 0.0;   // discriminator objectives (maximised)
  double g_img = 0.0, g_seq = 0.0;   // generator adversarial terms
  double rec = 0.0, visual = 0.0, logits = 0.0, total = 0.0;
  std::int64_t frames = 0;
  bool frame_count_ok = true;        // generated frames == chunks
};

/// Alternating updates: frame critic, sequence critic, then generator.
class LamTrainer {
 public:
  LamTrainer(const LamModelConfig& model, const LamLossWeights& weights, const LamTrainOptions& options,
             std::vector<LamSample> data, std::shared_ptr<bridge::PerceptualLoss> perceptual = nullptr);

  LamStepStats step();
  std::int64_t steps_done() const { return step_; }

  nn::Checkpoint checkpoint() const;
  void resume(const nn::Checkpoint& ckpt);

  Generator& generator() { return g_; }

 private:
  LamModelConfig cfg_;
  LamLossWeights weights_;
  LamTrainOptions opts_;
  std::vector<LamSample> data_;
  std::shared_ptr<bridge::PerceptualLoss> perceptual_;
  Generator g_{nullptr};
  FrameDiscriminator d_img_{nullptr};
  SequenceDiscriminator d_seq_{nullptr};
  std::unique_ptr<torch::optim::Adam> opt_g_, opt_img_, opt_seq_;
  std::int64_t step_ = 0;
};

struct LamRunResult {
  std::vector<std::filesystem::path> checkpoints;
  std::filesystem::path final_checkpoint;
  std::vector<LamStepStats> log;
};

/// Runs the trainer to `options.steps`, writing out_dir/checkpoints/*.ckpt,
/// out_dir/lam.ckpt (latest) and out_dir/loss_curve.csv. Resumes from
/// `resume_from` when given.
LamRunResult train_lam(const LamModelConfig& model, const LamLossWeights& weights, const LamTrainOptions& options,
                       std::vector<LamSample> data, const std::filesystem::path& out_dir,
                       std::shared_ptr<bridge::PerceptualLoss> perceptual = nullptr,
                       const std::optional<std::filesystem::path>& resume_from = std::nullopt);

}  // namespace svsr::lipgen
