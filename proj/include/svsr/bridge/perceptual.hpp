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

#include <vector>

#include <torch/torch.h>

#include "svsr/vsr/model.hpp"

namespace svsr::bridge {

struct PerceptualWeights {
  double visual = 0.0;
  double logits = 0.0;
  bool inert() const { return visual == 0.0 && logits == 0.0; }
};

inline constexpr double kKlEpsilon = 1e-8;

/// Mean absolute difference of front-end features (all elements).
torch::Tensor feature_distance(const torch::Tensor& z_real, const torch::Tensor& z_synth);

/// KL(softmax(real) || softmax(synth)) per position, averaged over the
/// positions where `valid` is true ([B, L]; all positions when undefined).
/// Logits are [B, L, V]; the synth distribution is clamped at kKlEpsilon.
torch::Tensor logits_kl(const torch::Tensor& real_logits, const torch::Tensor& synth_logits,
                        const torch::Tensor& valid = {});

struct PerceptualTerms {
  torch::Tensor visual;  // unweighted feature distance
  torch::Tensor logits;  // unweighted KL
  torch::Tensor total;   // weighted sum
};

PerceptualTerms combine(const PerceptualWeights& w, const torch::Tensor& visual, const torch::Tensor& logits);

/// Perceptual loss against a frozen recognizer. Parameters of the recognizer
/// are detached from autograd and the model is kept in eval mode; the real
/// side is evaluated without gradients.
class PerceptualLoss {
 public:
  PerceptualLoss(vsr::VsrModel recognizer, PerceptualWeights weights);

  /// real, synth [B, T, 96, 96] in [0, 1]; transcripts without sos/eos.
  PerceptualTerms operator()(const torch::Tensor& real, const torch::Tensor& synth,
                             const std::vector<std::vector<int>>& transcripts);

  const PerceptualWeights& weights() const { return weights_; }
  vsr::VsrModel& recognizer() { return model_; }

 private:
  vsr::VsrModel model_;
  PerceptualWeights weights_;
};

}  // namespace svsr::bridge
