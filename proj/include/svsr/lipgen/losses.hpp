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

#include <torch/torch.h>

#include "svsr/lipgen/config.hpp"
#include "svsr/media/clip.hpp"

namespace svsr::lipgen {

/// Discriminator outputs are clamped to [eps, 1 - eps] before any log.
inline constexpr double kProbEpsilon = 1e-7;

/// Throws NumericError when `probs` holds NaN or values outside [0, 1].
void check_probabilities(const torch::Tensor& probs, const char* what);

/// E[log D(real)] + E[log(1 - D(fake))] over discriminator probabilities.
/// The discriminator maximises this value; its supremum is 0.
torch::Tensor discriminator_objective(const torch::Tensor& d_real, const torch::Tensor& d_fake);

/// Frame critic objective on sampled frames, each batch conditioned on the
/// clip's first frame.
template <typename FrameCritic>
torch::Tensor frame_disc_objective(FrameCritic& critic, const torch::Tensor& real_frames,
                                   const torch::Tensor& fake_frames, const torch::Tensor& first_frame) {
  auto cond_real = first_frame.expand({real_frames.size(0), 1, first_frame.size(2), first_frame.size(3)});
  auto cond_fake = first_frame.expand({fake_frames.size(0), 1, first_frame.size(2), first_frame.size(3)});
  return discriminator_objective(critic->forward(real_frames, cond_real), critic->forward(fake_frames, cond_fake));
}

/// Sequence critic objective on whole clips [B, T, 96, 96].
template <typename SequenceCritic>
torch::Tensor seq_disc_objective(SequenceCritic& critic, const torch::Tensor& real_clips,
                                 const torch::Tensor& fake_clips) {
  return discriminator_objective(critic->forward(real_clips), critic->forward(fake_clips));
}

/// Non-saturating generator term -E[log D(fake)].
torch::Tensor generator_adversarial_term(const torch::Tensor& d_fake);

struct GeneratorAdversarialTerms {
  torch::Tensor frame;
  torch::Tensor sequence;
};

template <typename FrameCritic, typename SequenceCritic>
GeneratorAdversarialTerms generator_adv_terms(FrameCritic& frame_critic, SequenceCritic& seq_critic,
                                              const torch::Tensor& fake_frames, const torch::Tensor& first_frame,
                                              const torch::Tensor& fake_clips) {
  auto cond = first_frame.expand({fake_frames.size(0), 1, first_frame.size(2), first_frame.size(3)});
  return {generator_adversarial_term(frame_critic->forward(fake_frames, cond)),
          generator_adversarial_term(seq_critic->forward(fake_clips))};
}

/// Mean absolute difference over every pixel of every frame; inputs are
/// real-valued intensities in [0, 1] of identical shape.
torch::Tensor reconstruction_loss(const torch::Tensor& real, const torch::Tensor& fake);
double reconstruction_loss(const media::VideoClip& real, const media::VideoClip& fake);

/// Weighted lip animation objective; works for double and torch::Tensor.
template <typename T>
T lam_total_loss(const LamLossWeights& w, const T& img, const T& seq, const T& rec, const T& vsr) {
  return w.img * img + w.seq * seq + w.rec * rec + vsr;
}

}  // namespace svsr::lipgen
