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
#include <optional>
#include <string>
#include <vector>

#include "svsr/media/clip.hpp"
#include "svsr/media/manifest.hpp"
#include "svsr/nn/checkpoint.hpp"
#include "svsr/tokenizer/bpe.hpp"
#include "svsr/trainer/augment.hpp"
#include "svsr/trainer/sampler.hpp"
#include "svsr/vsr/model.hpp"

namespace svsr::vsr {

struct VsrSample {
  std::string id;
  media::VideoClip clip;
  std::string transcript;
  std::vector<int> tokens;
};

/// Loads clip + transcript pairs (roles real or synthetic) and tokenises them.
std::vector<VsrSample> load_vsr_samples(const media::Manifest& manifest, const tokenizer::Vocab& vocab);

struct VsrTrainOptions {
  std::int64_t steps = 500;
  double peak_lr = 1e-3;
  std::int64_t warmup_steps = 50;
  double weight_decay = 0.03;
  double grad_clip = 5.0;
  std::int64_t frame_budget = 2400;
  std::size_t max_batch_items = 0;  // 0 = limited by the frame budget only
  std::uint64_t seed = 0;
  trainer::AugmentPolicy augment{};
  trainer::MixPolicy mix{};
  /// Steps per checkpoint; 0 means one epoch (all frames of all datasets once).
  std::int64_t checkpoint_every = 0;
  std::size_t keep_checkpoints = 10;
  std::size_t average_last = 10;
  /// Called every `probe_every` steps with the current model; returning true stops training.
  std::int64_t probe_every = 0;
  std::function<bool(VsrModel&, std::int64_t)> probe;
};

struct VsrStepLog {
  std::int64_t step = 0;
  double loss = 0.0, ctc = 0.0, ce = 0.0, lr = 0.0;
  std::int64_t frames = 0;
  std::size_t items = 0;
};

struct VsrTrainResult {
  std::vector<std::filesystem::path> checkpoints;  // retained epoch checkpoints
  std::filesystem::path model_path;                 // averaged final model
  std::vector<VsrStepLog> log;
  std::int64_t steps_run = 0;
};

/// Trains on the weighted union of `datasets`. Writes checkpoints to
/// out_dir/checkpoints, the CSV log to out_dir/train_log.csv and the model
/// averaged over the last checkpoints to out_dir/model.ckpt.
VsrTrainResult train_vsr(const VsrConfig& config, const std::vector<const std::vector<VsrSample>*>& datasets,
                         const VsrTrainOptions& options, const std::filesystem::path& out_dir,
                         const nn::Checkpoint* frontend_init = nullptr);

nn::Checkpoint model_checkpoint(VsrModel& model, std::int64_t step);
/// Rebuilds a recognizer from a checkpoint written by model_checkpoint.
VsrModel load_vsr_model(const nn::Checkpoint& ckpt);
VsrModel load_vsr_model(const std::filesystem::path& path);

}  // namespace svsr::vsr
