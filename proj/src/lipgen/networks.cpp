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

#include "svsr/lipgen/networks.hpp"

#include <cmath>

#include <fmt/format.h>

#include "svsr/common/error.hpp"
#include "svsr/media/clip.hpp"

namespace svsr::lipgen {

namespace F = torch::nn::functional;
namespace tnn = torch::nn;

namespace {

constexpr double kLeakySlope = 0.2;

tnn::Conv2dOptions conv2d(int in, int out, int k, int s, int p) {
  return tnn::Conv2dOptions(in, out, k).stride(s).padding(p);
}

tnn::Conv1dOptions conv1d(int in, int out, int k, int s, int p) {
  return tnn::Conv1dOptions(in, out, k).stride(s).padding(p);
}

torch::Tensor upsample2x(const torch::Tensor& x) {
  return F::interpolate(x, F::InterpolateFuncOptions()
                               .scale_factor(std::vector<double>{2.0, 2.0})
                               .mode(torch::kBilinear)
                               .align_corners(false));
}

}  // namespace

// ---------------------------------------------------------------------------
ModulatedConv2dImpl::ModulatedConv2dImpl(int in_channels, int out_channels, int kernel, int style_dim, bool demodulate)
    : in_(in_channels),
      out_(out_channels),
      kernel_(kernel),
      demodulate_(demodulate),
      scale_(1.0 / std::sqrt(static_cast<double>(in_channels * kernel * kernel))) {
  weight_ = register_parameter("weight", torch::randn({out_, in_, kernel_, kernel_}));
  affine_ = register_module("affine", tnn::Linear(style_dim, in_));
  torch::NoGradGuard no_grad;
  affine_->bias.fill_(1.0);
}

torch::Tensor ModulatedConv2dImpl::forward(const torch::Tensor& x, const torch::Tensor& style) {
  const auto n = x.size(0);
  const auto h = x.size(2);
  const auto w = x.size(3);
  auto s = affine_->forward(style);                                          // [N, in]
  auto wt = weight_.unsqueeze(0) * scale_ * s.view({n, 1, in_, 1, 1});     // [N, out, in, k, k]
  if (demodulate_) {
    auto d = torch::rsqrt(wt.pow(2).sum({2, 3, 4}) + 1e-8);                  // [N, out]
    wt = wt * d.view({n, out_, 1, 1, 1});
  }
  auto y = F::conv2d(x.reshape({1, n * in_, h, w}), wt.reshape({n * out_, in_, kernel_, kernel_}),
                     F::Conv2dFuncOptions().padding(kernel_ / 2).groups(n));
  return y.view({n, out_, h, w});
}

StyledConvImpl::StyledConvImpl(int in_channels, int out_channels, int style_dim) {
  conv_ = register_module("conv", ModulatedConv2d(in_channels, out_channels, 3, style_dim, true));
  bias_ = register_parameter("bias", torch::zeros({out_channels}));
}

torch::Tensor StyledConvImpl::forward(const torch::Tensor& x, const torch::Tensor& style) {
  auto y = conv_->forward(x, style) + bias_.view({1, -1, 1, 1});
  return F::leaky_relu(y, F::LeakyReLUFuncOptions().negative_slope(kLeakySlope));
}

// ---------------------------------------------------------------------------
ImageEncoderImpl::ImageEncoderImpl(const LamModelConfig& cfg) {
  const int c[] = {cfg.channels(64), cfg.channels(128), cfg.channels(256), cfg.channels(512)};
  trunk_ = tnn::Sequential();
  int in = 1;
  for (int ch : c) {
    trunk_->push_back(tnn::Conv2d(conv2d(in, ch, 4, 2, 1)));
    trunk_->push_back(tnn::BatchNorm2d(ch));
    trunk_->push_back(tnn::ReLU());
    in = ch;
  }
  feature_channels_ = in;
  register_module("trunk", trunk_);
  head_ = register_module("head", tnn::Conv2d(conv2d(in, cfg.image_embedding(), 6, 1, 0)));
}

ImageEncoding ImageEncoderImpl::forward(const torch::Tensor& image) {
  auto feats = trunk_->forward(image * 2.0 - 1.0);
  auto z = torch::tanh(head_->forward(feats)).flatten(1);
  return {feats, z};
}

// ---------------------------------------------------------------------------
SpeechEncoderImpl::SpeechEncoderImpl(const LamModelConfig& cfg) {
  struct Spec {
    int out, k, s, p;
  };
  const Spec specs[] = {{cfg.channels(16), 80, 16, 32}, {cfg.channels(32), 4, 2, 1},   {cfg.channels(64), 4, 2, 1},
                        {cfg.channels(128), 4, 2, 1},   {cfg.channels(256), 10, 5, 3}, {cfg.speech_embedding(), 5, 1, 0}};
  convs_ = tnn::Sequential();
  int in = 1;
  for (std::size_t i = 0; i < std::size(specs); ++i) {
    convs_->push_back(tnn::Conv1d(conv1d(in, specs[i].out, specs[i].k, specs[i].s, specs[i].p)));
    if (i + 1 < std::size(specs)) {
      convs_->push_back(tnn::BatchNorm1d(specs[i].out));
      convs_->push_back(tnn::ReLU());
    } else {
      convs_->push_back(tnn::Tanh());
    }
    in = specs[i].out;
  }
  register_module("convs", convs_);
  gru_ = register_module("gru", tnn::GRU(tnn::GRUOptions(in, cfg.speech_embedding()).num_layers(2).batch_first(true)));
}

torch::Tensor SpeechEncoderImpl::forward(const torch::Tensor& chunks) {
  const auto b = chunks.size(0);
  const auto n = chunks.size(1);
  auto x = convs_->forward(chunks.reshape({b * n, 1, chunks.size(2)}));  // [B*n, C, len]
  x = x.mean(2).view({b, n, -1});
  return std::get<0>(gru_->forward(x));
}

// ---------------------------------------------------------------------------
FrameDecoderImpl::FrameDecoderImpl(const LamModelConfig& cfg, int in_channels) {
  // Resolutions 6, 12, 24, 48, 96.
  const int ch[] = {cfg.channels(512), cfg.channels(256), cfg.channels(128), cfg.channels(64), cfg.channels(32)};
  const int style = cfg.style_dim();
  const int per_level = std::max(1, cfg.decoder_convs_per_level);
  int in = in_channels;
  for (int level = 0; level < 5; ++level) {
    std::vector<StyledConv> convs;
    for (int j = 0; j < per_level; ++j) {
      convs.push_back(register_module(fmt::format("level{}_conv{}", level, j), StyledConv(in, ch[level], style)));
      in = ch[level];
    }
    convs_.push_back(std::move(convs));
    to_gray_.push_back(register_module(fmt::format("level{}_to_gray", level), ModulatedConv2d(in, 1, 1, style, false)));
    gray_bias_.push_back(register_parameter(fmt::format("level{}_gray_bias", level), torch::zeros({1})));
  }
}

torch::Tensor FrameDecoderImpl::forward(const torch::Tensor& features, const torch::Tensor& style) {
  torch::Tensor x = features;
  torch::Tensor gray;
  for (std::size_t level = 0; level < convs_.size(); ++level) {
    if (level > 0) x = upsample2x(x);
    for (auto& conv : convs_[level]) x = conv->forward(x, style);
    auto g = to_gray_[level]->forward(x, style) + gray_bias_[level].view({1, 1, 1, 1});
    gray = level == 0 ? g : upsample2x(gray) + g;
  }
  return torch::sigmoid(gray);
}

// ---------------------------------------------------------------------------
GeneratorImpl::GeneratorImpl(const LamModelConfig& cfg) : cfg_(cfg) {
  image_encoder_ = register_module("image_encoder", ImageEncoder(cfg));
  speech_encoder_ = register_module("speech_encoder", SpeechEncoder(cfg));
  decoder_ = register_module("decoder", FrameDecoder(cfg, image_encoder_->feature_channels()));
}

torch::Tensor GeneratorImpl::forward(const torch::Tensor& first_frame, const torch::Tensor& chunks,
                                     const torch::Tensor& rotations) {
  if (first_frame.dim() != 4 || first_frame.size(1) != 1 || first_frame.size(2) != media::kFrameSize ||
      first_frame.size(3) != media::kFrameSize)
    throw ShapeError("generator first frame must be [B, 1, 96, 96]");
  if (chunks.dim() != 3 || rotations.dim() != 3 || rotations.size(2) != cfg_.rotation_dim)
    throw ShapeError("generator expects chunks [B, n, L] and rotations [B, n, 9]");
  const auto b = chunks.size(0);
  const auto n = chunks.size(1);
  if (rotations.size(1) != n)
    throw ShapeError(fmt::format("rotation sequence has {} elements but speech has {} chunks", rotations.size(1), n));
  if (first_frame.size(0) != b || rotations.size(0) != b) throw ShapeError("generator inputs disagree on batch size");

  auto enc = image_encoder_->forward(first_frame);
  auto zs = speech_encoder_->forward(chunks);  // [B, n, z_s]
  auto zi = enc.embedding.unsqueeze(1).expand({b, n, enc.embedding.size(1)});
  auto style = torch::cat({zi, zs, rotations.to(zs.dtype())}, 2).reshape({b * n, -1});
  auto feats = enc.features.unsqueeze(1)
                   .expand({b, n, enc.features.size(1), enc.features.size(2), enc.features.size(3)})
                   .reshape({b * n, enc.features.size(1), enc.features.size(2), enc.features.size(3)});
  auto frames = decoder_->forward(feats, style);  // [B*n, 1, 96, 96]
  return frames.view({b, n, media::kFrameSize, media::kFrameSize});
}

// ---------------------------------------------------------------------------
FrameDiscriminatorImpl::FrameDiscriminatorImpl(const LamModelConfig& cfg) {
  net_ = tnn::Sequential();
  int in = 2;
  for (int full : {32, 64, 128, 256}) {
    const int ch = cfg.channels(full);
    net_->push_back(tnn::Conv2d(conv2d(in, ch, 4, 2, 1)));
    net_->push_back(tnn::BatchNorm2d(ch));
    net_->push_back(tnn::LeakyReLU(tnn::LeakyReLUOptions().negative_slope(kLeakySlope)));
    in = ch;
  }
  net_->push_back(tnn::Conv2d(conv2d(in, 1, 6, 1, 0)));
  register_module("net", net_);
}

torch::Tensor FrameDiscriminatorImpl::logits(const torch::Tensor& frames, const torch::Tensor& first_frame) {
  auto x = torch::cat({frames, first_frame}, 1) * 2.0 - 1.0;
  return net_->forward(x).flatten();
}

// ---------------------------------------------------------------------------
SequenceDiscriminatorImpl::SequenceDiscriminatorImpl(const LamModelConfig& cfg) {
  struct Spec {
    int out;
    std::vector<int64_t> k, s, p;
  };
  const std::vector<Spec> specs = {{cfg.channels(64), {7, 4, 4}, {1, 2, 2}, {3, 1, 1}},
                                   {cfg.channels(128), {1, 4, 4}, {1, 2, 2}, {0, 1, 1}},
                                   {cfg.channels(256), {1, 4, 4}, {1, 2, 2}, {0, 1, 1}},
                                   {cfg.channels(256), {1, 4, 4}, {1, 2, 2}, {0, 1, 1}},
                                   {cfg.channels(128), {1, 6, 6}, {1, 1, 1}, {0, 0, 0}}};
  convs_ = tnn::Sequential();
  int in = 1;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& s = specs[i];
    convs_->push_back(tnn::Conv3d(tnn::Conv3dOptions(in, s.out, torch::IntArrayRef(s.k))
                                      .stride(torch::IntArrayRef(s.s))
                                      .padding(torch::IntArrayRef(s.p))));
    if (i + 1 < specs.size()) {
      convs_->push_back(tnn::BatchNorm3d(s.out));
      convs_->push_back(tnn::ReLU());
    } else {
      convs_->push_back(tnn::Tanh());
    }
    in = s.out;
  }
  register_module("convs", convs_);
  const int hidden = cfg.channels(512);
  gru_ = register_module("gru", tnn::GRU(tnn::GRUOptions(in, hidden).batch_first(true)));
  head_ = register_module("head", tnn::Linear(hidden, 1));
}

torch::Tensor SequenceDiscriminatorImpl::logits(const torch::Tensor& clips) {
  const auto b = clips.size(0);
  const auto t = clips.size(1);
  auto x = convs_->forward(clips.unsqueeze(1) * 2.0 - 1.0);  // [B, C, T, 1, 1]
  x = x.flatten(3).mean(3).transpose(1, 2);                // [B, T, C]
  auto out = std::get<0>(gru_->forward(x));                 // [B, T, H]
  return head_->forward(out.select(1, t - 1)).view({b});
}

}  // namespace svsr::lipgen
