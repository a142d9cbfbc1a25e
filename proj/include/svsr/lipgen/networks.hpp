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

namespace svsr::lipgen {

/// 2D convolution whose weights are scaled per input channel by an affine
/// projection of a style vector, then (optionally) demodulated so each output
/// channel has unit expected norm. Each sample in the batch gets its own
/// kernel; the batch is folded into the group dimension.
class ModulatedConv2dImpl : public torch::nn::Module {
 public:
  ModulatedConv2dImpl(int in_channels, int out_channels, int kernel, int style_dim, bool demodulate = true);
  torch::Tensor forward(const torch::Tensor& x, const torch::Tensor& style);

 private:
  int in_, out_, kernel_;
  bool demodulate_;
  double scale_;
  torch::Tensor weight_;
  torch::nn::Linear affine_{nullptr};
};
TORCH_MODULE(ModulatedConv2d);

/// Modulated conv + bias + leaky ReLU.
class StyledConvImpl : public torch::nn::Module {
 public:
  StyledConvImpl(int in_channels, int out_channels, int style_dim);
  torch::Tensor forward(const torch::Tensor& x, const torch::Tensor& style);

 private:
  ModulatedConv2d conv_{nullptr};
  torch::Tensor bias_;
};
TORCH_MODULE(StyledConv);

struct ImageEncoding {
  torch::Tensor features;   // [N, C, 6, 6] penultimate map
  torch::Tensor embedding;  // [N, z_i]
};

/// Four stride-2 4x4 convolutions (BN, ReLU) to a 6x6 map, then a 6x6
/// valid convolution with tanh to the image embedding.
class ImageEncoderImpl : public torch::nn::Module {
 public:
  explicit ImageEncoderImpl(const LamModelConfig& cfg);
  ImageEncoding forward(const torch::Tensor& image);  // [N, 1, 96, 96] in [0, 1]
  int feature_channels() const { return feature_channels_; }

 private:
  torch::nn::Sequential trunk_{nullptr};
  torch::nn::Conv2d head_{nullptr};
  int feature_channels_;
};
TORCH_MODULE(ImageEncoder);

/// Six 1D convolutions per 200 ms chunk followed by a two-layer GRU running
/// across the chunks of a clip.
class SpeechEncoderImpl : public torch::nn::Module {
 public:
  explicit SpeechEncoderImpl(const LamModelConfig& cfg);
  torch::Tensor forward(const torch::Tensor& chunks);  // [B, n, L] -> [B, n, z_s]

 private:
  torch::nn::Sequential convs_{nullptr};
  torch::nn::GRU gru_{nullptr};
};
TORCH_MODULE(SpeechEncoder);

/// Style-modulated decoder from the 6x6 image features to a 96x96 frame,
/// with skip-summed gray outputs at every resolution.
class FrameDecoderImpl : public torch::nn::Module {
 public:
  FrameDecoderImpl(const LamModelConfig& cfg, int in_channels);
  torch::Tensor forward(const torch::Tensor& features, const torch::Tensor& style);  // -> [N, 1, 96, 96]

 private:
  std::vector<std::vector<StyledConv>> convs_;  // per level
  std::vector<ModulatedConv2d> to_gray_;
  std::vector<torch::Tensor> gray_bias_;
};
TORCH_MODULE(FrameDecoder);

class GeneratorImpl : public torch::nn::Module {
 public:
  explicit GeneratorImpl(const LamModelConfig& cfg);

  /// first_frame [B, 1, 96, 96] in [0, 1]; chunks [B, n, L]; rotations
  /// [B, n, 9]. Returns frames [B, n, 96, 96] in [0, 1].
  torch::Tensor forward(const torch::Tensor& first_frame, const torch::Tensor& chunks, const torch::Tensor& rotations);

  const LamModelConfig& config() const { return cfg_; }

 private:
  LamModelConfig cfg_;
  ImageEncoder image_encoder_{nullptr};
  SpeechEncoder speech_encoder_{nullptr};
  FrameDecoder decoder_{nullptr};
};
TORCH_MODULE(Generator);

/// Judges single frames conditioned on the clip's first frame (2-channel input).
class FrameDiscriminatorImpl : public torch::nn::Module {
 public:
  explicit FrameDiscriminatorImpl(const LamModelConfig& cfg);
  torch::Tensor logits(const torch::Tensor& frames, const torch::Tensor& first_frame);  // [N,1,96,96] x2 -> [N]
  torch::Tensor forward(const torch::Tensor& frames, const torch::Tensor& first_frame) {
    return torch::sigmoid(logits(frames, first_frame));
  }

 private:
  torch::nn::Sequential net_{nullptr};
};
TORCH_MODULE(FrameDiscriminator);

/// Spatio-temporal convolutions, a GRU over time and a scalar head.
class SequenceDiscriminatorImpl : public torch::nn::Module {
 public:
  explicit SequenceDiscriminatorImpl(const LamModelConfig& cfg);
  torch::Tensor logits(const torch::Tensor& clips);  // [B, T, 96, 96] -> [B]
  torch::Tensor forward(const torch::Tensor& clips) { return torch::sigmoid(logits(clips)); }

 private:
  torch::nn::Sequential convs_{nullptr};
  torch::nn::GRU gru_{nullptr};
  torch::nn::Linear head_{nullptr};
};
TORCH_MODULE(SequenceDiscriminator);

}  // namespace svsr::lipgen
