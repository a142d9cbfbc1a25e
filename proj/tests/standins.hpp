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

// Tiny differentiable stand-ins for the critics and toy data builders used
// by several tests.

#pragma once

#include <torch/torch.h>

#include "svsr/lipgen/train.hpp"
#include "svsr/media/chunk.hpp"
#include "svsr/toy/corpus.hpp"
#include "svsr/vsr/model.hpp"

namespace svsr::testing {

// Two-layer frame critic on [N, 1, H, W] frames plus the conditioning frame.
struct MicroFrameCriticImpl : torch::nn::Module {
  explicit MicroFrameCriticImpl(std::int64_t pixels) {
    l1 = register_module("l1", torch::nn::Linear(2 * pixels, 4));
    l2 = register_module("l2", torch::nn::Linear(4, 1));
  }
  torch::Tensor forward(const torch::Tensor& frames, const torch::Tensor& first) {
    auto x = torch::cat({frames.flatten(1), first.flatten(1)}, 1);
    return torch::sigmoid(l2(torch::tanh(l1(x)))).squeeze(1);
  }
  torch::nn::Linear l1{nullptr}, l2{nullptr};
};
TORCH_MODULE(MicroFrameCritic);

// Two-layer clip critic on [B, T, H, W].
struct MicroSequenceCriticImpl : torch::nn::Module {
  explicit MicroSequenceCriticImpl(std::int64_t values) {
    l1 = register_module("l1", torch::nn::Linear(values, 4));
    l2 = register_module("l2", torch::nn::Linear(4, 1));
  }
  torch::Tensor forward(const torch::Tensor& clips) {
    return torch::sigmoid(l2(torch::tanh(l1(clips.flatten(1))))).squeeze(1);
  }
  torch::nn::Linear l1{nullptr}, l2{nullptr};
};
TORCH_MODULE(MicroSequenceCritic);

// Critic answering a fixed probability regardless of its input.
struct ConstantCriticImpl : torch::nn::Module {
  explicit ConstantCriticImpl(double p) : p(p) {}
  torch::Tensor forward(const torch::Tensor& x, const torch::Tensor& = {}) {
    return torch::full({x.size(0)}, p, x.options());
  }
  double p;
};
TORCH_MODULE(ConstantCritic);

// Smallest recognizer that still exercises every block.
inline vsr::VsrConfig micro_vsr_config(int encoder_depth = 1, int vocab_size = 12) {
  vsr::VsrConfig c;
  c.vocab_size = vocab_size;
  c.frontend_stem = 4;
  c.frontend_channels = {4, 4, 8, 8};
  c.encoder_depth = encoder_depth;
  c.d_model = 16;
  c.ff_dim = 32;
  c.heads = 2;
  c.conv_kernel = 3;
  c.max_relative_position = 8;
  c.decoder_depth = 1;
  c.dropout = 0.0;
  c.validate();
  return c;
}

// Toy audio-visual samples rendered directly (no files).
inline std::vector<lipgen::LamSample> toy_lam_samples(int count, std::uint64_t seed, int min_words = 1,
                                                      int max_words = 2) {
  std::vector<lipgen::LamSample> out;
  for (const auto& u : toy::make_script("lam", count, min_words, max_words, seed)) {
    lipgen::LamSample s;
    s.id = u.id;
    s.video = toy::render_clip(u);
    s.chunks = media::chunk_speech(toy::render_audio(u), 25.0);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace svsr::testing
