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

#include <optional>
#include <vector>

#include <torch/torch.h>

#include "svsr/vsr/config.hpp"

namespace svsr::vsr {

class ResidualBlockImpl : public torch::nn::Module {
 public:
  ResidualBlockImpl(int in_channels, int out_channels, int stride);
  torch::Tensor forward(const torch::Tensor& x);

 private:
  torch::nn::Conv2d conv1_{nullptr}, conv2_{nullptr};
  torch::nn::BatchNorm2d bn1_{nullptr}, bn2_{nullptr};
  torch::nn::Sequential shortcut_{nullptr};
};
TORCH_MODULE(ResidualBlock);

/// 3D conv (5x7x7) stem, residual 2D trunk applied per frame, global average
/// pooling. [B, T, 96, 96] normalised frames -> [B, T, D_f].
class FrontendImpl : public torch::nn::Module {
 public:
  explicit FrontendImpl(const VsrConfig& cfg);
  torch::Tensor forward(const torch::Tensor& frames);

 private:
  torch::nn::Conv3d stem_{nullptr};
  torch::nn::BatchNorm3d stem_bn_{nullptr};
  torch::nn::Sequential trunk_{nullptr};
};
TORCH_MODULE(Frontend);

/// Multi-head attention over [B, L, D]. `bias` is added to the attention
/// scores ([H, Lq, Lk] or [B, H, Lq, Lk]); `mask` is true where a key must
/// be ignored ([B, 1 or Lq, Lk]).
class MultiHeadAttentionImpl : public torch::nn::Module {
 public:
  MultiHeadAttentionImpl(int d_model, int heads, double dropout);
  torch::Tensor forward(const torch::Tensor& query, const torch::Tensor& memory,
                        const std::optional<torch::Tensor>& bias, const std::optional<torch::Tensor>& mask);

 private:
  int heads_;
  double dropout_;
  torch::nn::Linear q_{nullptr}, k_{nullptr}, v_{nullptr}, out_{nullptr};
};
TORCH_MODULE(MultiHeadAttention);

/// Half-step FF, self-attention with learned relative-position biases,
/// convolution module, half-step FF, LayerNorm.
class ConformerBlockImpl : public torch::nn::Module {
 public:
  explicit ConformerBlockImpl(const VsrConfig& cfg);
  torch::Tensor forward(const torch::Tensor& x, const torch::Tensor& pad_mask);  // pad_mask [B, T], true = padding

 private:
  torch::Tensor feed_forward(torch::nn::Sequential& ff, const torch::Tensor& x);
  torch::Tensor relative_bias(std::int64_t length);

  double dropout_;
  int max_rel_;
  torch::nn::Sequential ff1_{nullptr}, ff2_{nullptr};
  torch::nn::LayerNorm attn_norm_{nullptr}, conv_norm_{nullptr}, final_norm_{nullptr};
  MultiHeadAttention attn_{nullptr};
  torch::Tensor rel_table_;  // [H, 2R + 1]
  torch::nn::Conv1d pointwise1_{nullptr}, depthwise_{nullptr}, pointwise2_{nullptr};
  torch::nn::BatchNorm1d conv_bn_{nullptr};
};
TORCH_MODULE(ConformerBlock);

/// Pre-norm Transformer decoder layer: causal self-attention, cross-attention, FF.
class DecoderLayerImpl : public torch::nn::Module {
 public:
  explicit DecoderLayerImpl(const VsrConfig& cfg);
  torch::Tensor forward(const torch::Tensor& y, const torch::Tensor& memory, const torch::Tensor& causal_mask,
                        const torch::Tensor& memory_mask);

 private:
  double dropout_;
  torch::nn::LayerNorm norm1_{nullptr}, norm2_{nullptr}, norm3_{nullptr};
  MultiHeadAttention self_attn_{nullptr}, cross_attn_{nullptr};
  torch::nn::Sequential ff_{nullptr};
};
TORCH_MODULE(DecoderLayer);

/// Sinusoidal absolute position table [length, d_model].
torch::Tensor sinusoidal_positions(std::int64_t length, std::int64_t d_model);

/// [B, T] true where t >= lengths[b].
torch::Tensor padding_mask(const torch::Tensor& lengths, std::int64_t max_length);

struct VsrFeatureBundle {
  torch::Tensor z_f;         // [B, T, D_f]
  torch::Tensor z_e;         // [B, T, D]
  torch::Tensor ctc_logits;  // [B, T, V]
  torch::Tensor dec_logits;  // [B, L, V] teacher-forced
};

struct VsrLoss {
  torch::Tensor total;
  torch::Tensor ctc;
  torch::Tensor ce;
};

class VsrModelImpl : public torch::nn::Module {
 public:
  explicit VsrModelImpl(const VsrConfig& cfg);

  const VsrConfig& config() const { return cfg_; }

  /// frames [B, T, 96, 96] intensities in [0, 1] -> z_f [B, T, D_f].
  torch::Tensor frontend(const torch::Tensor& frames);
  /// z_f -> z_e; `lengths` [B] marks valid frames.
  torch::Tensor encode(const torch::Tensor& z_f, const torch::Tensor& lengths);
  torch::Tensor ctc_logits(const torch::Tensor& z_e);
  /// y_in [B, L] begins with sos; returns logits [B, L, V].
  torch::Tensor decoder_logits(const torch::Tensor& z_e, const torch::Tensor& lengths, const torch::Tensor& y_in);

  VsrFeatureBundle features(const torch::Tensor& frames, const torch::Tensor& lengths, const torch::Tensor& y_in);

  /// Joint loss over a padded batch; targets exclude sos/eos. Each loss term is
  /// computed per utterance and averaged over the batch.
  VsrLoss loss(const torch::Tensor& frames, const torch::Tensor& lengths,
               const std::vector<std::vector<int>>& targets);

  /// Parameter-name prefix of the visual front-end.
  static constexpr const char* kFrontendPrefix = "frontend.";

 private:
  VsrConfig cfg_;
  Frontend frontend_{nullptr};
  torch::nn::Linear project_{nullptr};
  torch::nn::ModuleList encoder_{nullptr};
  torch::nn::Linear ctc_head_{nullptr};
  torch::nn::Embedding embed_{nullptr};
  torch::nn::ModuleList decoder_{nullptr};
  torch::nn::LayerNorm decoder_norm_{nullptr};
  torch::nn::Linear decoder_head_{nullptr};
};
TORCH_MODULE(VsrModel);

/// Builds the teacher-forcing input [sos, y...] and output [y..., eos],
/// padded with pad ids. Throws ShapeError for ids outside [0, vocab).
std::pair<torch::Tensor, torch::Tensor> teacher_forcing_pair(const std::vector<std::vector<int>>& targets,
                                                             int vocab_size);

/// α·ctc + (1 − α)·ce.
template <typename T>
T joint_loss(const T& ce, const T& ctc, double alpha) {
  return alpha * ctc + (1.0 - alpha) * ce;
}

}  // namespace svsr::vsr
