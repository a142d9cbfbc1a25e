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

#include "svsr/vsr/model.hpp"

#include <cmath>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "svsr/common/error.hpp"
#include "svsr/tokenizer/bpe.hpp"
#include "svsr/vsr/ctc.hpp"

namespace svsr::vsr {

namespace F = torch::nn::functional;
using tokenizer::SpecialIds;

ResidualBlockImpl::ResidualBlockImpl(int in_channels, int out_channels, int stride) {
  conv1_ = register_module("conv1", torch::nn::Conv2d(torch::nn::Conv2dOptions(in_channels, out_channels, 3)
                                                          .stride(stride).padding(1).bias(false)));
  bn1_ = register_module("bn1", torch::nn::BatchNorm2d(out_channels));
  conv2_ = register_module("conv2", torch::nn::Conv2d(torch::nn::Conv2dOptions(out_channels, out_channels, 3)
                                                          .padding(1).bias(false)));
  bn2_ = register_module("bn2", torch::nn::BatchNorm2d(out_channels));
  shortcut_ = torch::nn::Sequential();
  if (stride != 1 || in_channels != out_channels) {
    shortcut_->push_back(torch::nn::Conv2d(torch::nn::Conv2dOptions(in_channels, out_channels, 1)
                                               .stride(stride).bias(false)));
    shortcut_->push_back(torch::nn::BatchNorm2d(out_channels));
  }
  register_module("shortcut", shortcut_);
}

torch::Tensor ResidualBlockImpl::forward(const torch::Tensor& x) {
  auto y = torch::relu(bn1_(conv1_(x)));
  y = bn2_(conv2_(y));
  auto s = shortcut_->is_empty() ? x : shortcut_->forward(x);
  return torch::relu(y + s);
}

FrontendImpl::FrontendImpl(const VsrConfig& cfg) {
  stem_ = register_module("stem", torch::nn::Conv3d(torch::nn::Conv3dOptions(1, cfg.frontend_stem, {5, 7, 7})
                                                        .stride({1, 2, 2}).padding({2, 3, 3}).bias(false)));
  stem_bn_ = register_module("stem_bn", torch::nn::BatchNorm3d(cfg.frontend_stem));
  trunk_ = torch::nn::Sequential();
  int in = cfg.frontend_stem;
  for (std::size_t s = 0; s < cfg.frontend_channels.size(); ++s) {
    const int out = cfg.frontend_channels[s];
    for (int b = 0; b < cfg.frontend_blocks_per_stage; ++b) {
      trunk_->push_back(ResidualBlock(in, out, (s > 0 && b == 0) ? 2 : 1));
      in = out;
    }
  }
  register_module("trunk", trunk_);
}

torch::Tensor FrontendImpl::forward(const torch::Tensor& frames) {
  if (frames.dim() != 4 || frames.size(2) != 96 || frames.size(3) != 96)
    throw ShapeError(fmt::format("front-end expects [B, T, 96, 96], got {}", fmt::join(frames.sizes(), "x")));
  const auto batch = frames.size(0);
  const auto length = frames.size(1);
  auto x = torch::relu(stem_bn_(stem_(frames.unsqueeze(1))));
  x = F::max_pool3d(x, F::MaxPool3dFuncOptions({1, 3, 3}).stride({1, 2, 2}).padding({0, 1, 1}));
  // [B, C, T, H, W] -> [B*T, C, H, W]
  x = x.transpose(1, 2).flatten(0, 1);
  x = trunk_->forward(x);
  x = x.mean({2, 3});
  return x.view({batch, length, -1});
}

MultiHeadAttentionImpl::MultiHeadAttentionImpl(int d_model, int heads, double dropout)
    : heads_(heads), dropout_(dropout) {
  q_ = register_module("q", torch::nn::Linear(d_model, d_model));
  k_ = register_module("k", torch::nn::Linear(d_model, d_model));
  v_ = register_module("v", torch::nn::Linear(d_model, d_model));
  out_ = register_module("out", torch::nn::Linear(d_model, d_model));
}

torch::Tensor MultiHeadAttentionImpl::forward(const torch::Tensor& query, const torch::Tensor& memory,
                                              const std::optional<torch::Tensor>& bias,
                                              const std::optional<torch::Tensor>& mask) {
  const auto batch = query.size(0);
  const auto lq = query.size(1);
  const auto lk = memory.size(1);
  const auto d = query.size(2);
  const auto dh = d / heads_;
  auto q = q_(query).view({batch, lq, heads_, dh}).transpose(1, 2);
  auto k = k_(memory).view({batch, lk, heads_, dh}).transpose(1, 2);
  auto v = v_(memory).view({batch, lk, heads_, dh}).transpose(1, 2);
  auto scores = torch::matmul(q, k.transpose(-2, -1)) / std::sqrt(static_cast<double>(dh));
  if (bias) scores = scores + *bias;
  if (mask) scores = scores.masked_fill(mask->unsqueeze(1), -1e9);
  auto attn = torch::softmax(scores, -1);
  attn = torch::dropout(attn, dropout_, is_training());
  auto ctx = torch::matmul(attn, v).transpose(1, 2).reshape({batch, lq, d});
  return out_(ctx);
}

namespace {

torch::nn::Sequential make_ff(int d_model, int ff_dim, double dropout, bool swish) {
  torch::nn::Sequential ff;
  ff->push_back(torch::nn::LayerNorm(torch::nn::LayerNormOptions({d_model})));
  ff->push_back(torch::nn::Linear(d_model, ff_dim));
  if (swish)
    ff->push_back(torch::nn::SiLU());
  else
    ff->push_back(torch::nn::ReLU());
  ff->push_back(torch::nn::Dropout(dropout));
  ff->push_back(torch::nn::Linear(ff_dim, d_model));
  return ff;
}

}  // namespace

ConformerBlockImpl::ConformerBlockImpl(const VsrConfig& cfg)
    : dropout_(cfg.dropout), max_rel_(cfg.max_relative_position) {
  ff1_ = register_module("ff1", make_ff(cfg.d_model, cfg.ff_dim, cfg.dropout, true));
  attn_norm_ = register_module("attn_norm", torch::nn::LayerNorm(torch::nn::LayerNormOptions({cfg.d_model})));
  attn_ = register_module("attn", MultiHeadAttention(cfg.d_model, cfg.heads, cfg.dropout));
  rel_table_ = register_parameter("rel_bias", torch::zeros({cfg.heads, 2 * max_rel_ + 1}));
  conv_norm_ = register_module("conv_norm", torch::nn::LayerNorm(torch::nn::LayerNormOptions({cfg.d_model})));
  pointwise1_ = register_module("pointwise1", torch::nn::Conv1d(cfg.d_model, 2 * cfg.d_model, 1));
  depthwise_ = register_module("depthwise", torch::nn::Conv1d(torch::nn::Conv1dOptions(cfg.d_model, cfg.d_model,
                                                                                      cfg.conv_kernel)
                                                                  .padding(cfg.conv_kernel / 2)
                                                                  .groups(cfg.d_model)));
  conv_bn_ = register_module("conv_bn", torch::nn::BatchNorm1d(cfg.d_model));
  pointwise2_ = register_module("pointwise2", torch::nn::Conv1d(cfg.d_model, cfg.d_model, 1));
  ff2_ = register_module("ff2", make_ff(cfg.d_model, cfg.ff_dim, cfg.dropout, true));
  final_norm_ = register_module("final_norm", torch::nn::LayerNorm(torch::nn::LayerNormOptions({cfg.d_model})));
  // Small random offsets so relative positions are distinguishable from the start.
  torch::NoGradGuard guard;
  rel_table_.normal_(0.0, 0.02);
}

torch::Tensor ConformerBlockImpl::feed_forward(torch::nn::Sequential& ff, const torch::Tensor& x) {
  return torch::dropout(ff->forward(x), dropout_, is_training());
}

torch::Tensor ConformerBlockImpl::relative_bias(std::int64_t length) {
  auto pos = torch::arange(length, torch::kInt64);
  auto rel = (pos.unsqueeze(0) - pos.unsqueeze(1)).clamp(-max_rel_, max_rel_) + max_rel_;  // [i, j] = j - i
  return rel_table_.index_select(1, rel.flatten()).view({rel_table_.size(0), length, length});
}

torch::Tensor ConformerBlockImpl::forward(const torch::Tensor& x_in, const torch::Tensor& pad_mask) {
  auto x = x_in + 0.5 * feed_forward(ff1_, x_in);

  auto h = attn_norm_(x);
  auto key_mask = pad_mask.unsqueeze(1);  // [B, 1, T]
  h = attn_(h, h, relative_bias(x.size(1)), key_mask);
  x = x + torch::dropout(h, dropout_, is_training());

  h = conv_norm_(x).masked_fill(pad_mask.unsqueeze(2), 0.0).transpose(1, 2);  // [B, D, T]
  h = F::glu(pointwise1_(h), F::GLUFuncOptions(1));
  h = depthwise_(h);
  h = torch::silu(conv_bn_(h));
  h = pointwise2_(h).transpose(1, 2);
  x = x + torch::dropout(h, dropout_, is_training());

  x = x + 0.5 * feed_forward(ff2_, x);
  return final_norm_(x);
}

DecoderLayerImpl::DecoderLayerImpl(const VsrConfig& cfg) : dropout_(cfg.dropout) {
  norm1_ = register_module("norm1", torch::nn::LayerNorm(torch::nn::LayerNormOptions({cfg.d_model})));
  self_attn_ = register_module("self_attn", MultiHeadAttention(cfg.d_model, cfg.heads, cfg.dropout));
  norm2_ = register_module("norm2", torch::nn::LayerNorm(torch::nn::LayerNormOptions({cfg.d_model})));
  cross_attn_ = register_module("cross_attn", MultiHeadAttention(cfg.d_model, cfg.heads, cfg.dropout));
  ff_ = register_module("ff", make_ff(cfg.d_model, cfg.ff_dim, cfg.dropout, false));
}

torch::Tensor DecoderLayerImpl::forward(const torch::Tensor& y_in, const torch::Tensor& memory,
                                        const torch::Tensor& causal_mask, const torch::Tensor& memory_mask) {
  auto h = norm1_(y_in);
  auto y = y_in + torch::dropout(self_attn_(h, h, std::nullopt, causal_mask), dropout_, is_training());
  h = norm2_(y);
  y = y + torch::dropout(cross_attn_(h, memory, std::nullopt, memory_mask), dropout_, is_training());
  return y + torch::dropout(ff_->forward(y), dropout_, is_training());
}

torch::Tensor sinusoidal_positions(std::int64_t length, std::int64_t d_model) {
  auto pos = torch::arange(length, torch::kFloat32).unsqueeze(1);
  auto i = torch::arange(0, d_model, 2, torch::kFloat32);
  auto freq = torch::exp(i * (-std::log(10000.0) / static_cast<double>(d_model)));
  auto table = torch::zeros({length, d_model});
  table.index_put_({torch::indexing::Slice(), torch::indexing::Slice(0, torch::indexing::None, 2)},
                   torch::sin(pos * freq));
  table.index_put_({torch::indexing::Slice(), torch::indexing::Slice(1, torch::indexing::None, 2)},
                   torch::cos(pos * freq).slice(1, 0, d_model / 2));
  return table;
}

torch::Tensor padding_mask(const torch::Tensor& lengths, std::int64_t max_length) {
  auto steps = torch::arange(max_length, torch::kInt64).unsqueeze(0);
  return steps >= lengths.to(torch::kInt64).unsqueeze(1);
}

VsrModelImpl::VsrModelImpl(const VsrConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  frontend_ = register_module("frontend", Frontend(cfg_));
  project_ = register_module("project", torch::nn::Linear(cfg_.frontend_dim(), cfg_.d_model));
  encoder_ = torch::nn::ModuleList();
  for (int i = 0; i < cfg_.encoder_depth; ++i) encoder_->push_back(ConformerBlock(cfg_));
  register_module("encoder", encoder_);
  ctc_head_ = register_module("ctc_head", torch::nn::Linear(cfg_.d_model, cfg_.vocab_size));
  embed_ = register_module("embed", torch::nn::Embedding(cfg_.vocab_size, cfg_.d_model));
  decoder_ = torch::nn::ModuleList();
  for (int i = 0; i < cfg_.decoder_depth; ++i) decoder_->push_back(DecoderLayer(cfg_));
  register_module("decoder", decoder_);
  decoder_norm_ = register_module("decoder_norm", torch::nn::LayerNorm(torch::nn::LayerNormOptions({cfg_.d_model})));
  decoder_head_ = register_module("decoder_head", torch::nn::Linear(cfg_.d_model, cfg_.vocab_size));
}

torch::Tensor VsrModelImpl::frontend(const torch::Tensor& frames) {
  return frontend_((frames - cfg_.input_mean) / cfg_.input_std);
}

torch::Tensor VsrModelImpl::encode(const torch::Tensor& z_f, const torch::Tensor& lengths) {
  auto x = project_(z_f);
  auto mask = padding_mask(lengths, z_f.size(1));
  for (auto& block : *encoder_) x = block->as<ConformerBlock>()->forward(x, mask);
  return x;
}

torch::Tensor VsrModelImpl::ctc_logits(const torch::Tensor& z_e) { return ctc_head_(z_e); }

torch::Tensor VsrModelImpl::decoder_logits(const torch::Tensor& z_e, const torch::Tensor& lengths,
                                           const torch::Tensor& y_in) {
  if (y_in.dim() != 2 || y_in.size(1) < 1) throw ShapeError("decoder input must be [B, L >= 1]");
  if (y_in.min().item<std::int64_t>() < 0 || y_in.max().item<std::int64_t>() >= cfg_.vocab_size)
    throw ShapeError(fmt::format("decoder token id outside [0, {})", cfg_.vocab_size));
  const auto len = y_in.size(1);
  auto y = embed_(y_in) * std::sqrt(static_cast<double>(cfg_.d_model)) +
           sinusoidal_positions(len, cfg_.d_model).to(z_e.options());
  y = torch::dropout(y, cfg_.dropout, is_training());
  auto causal = torch::triu(torch::ones({len, len}, torch::kBool), 1).unsqueeze(0);  // [1, L, L]
  auto memory_mask = padding_mask(lengths, z_e.size(1)).unsqueeze(1);              // [B, 1, T]
  for (auto& layer : *decoder_) y = layer->as<DecoderLayer>()->forward(y, z_e, causal, memory_mask);
  return decoder_head_(decoder_norm_(y));
}

VsrFeatureBundle VsrModelImpl::features(const torch::Tensor& frames, const torch::Tensor& lengths,
                                        const torch::Tensor& y_in) {
  VsrFeatureBundle out;
  out.z_f = frontend(frames);
  out.z_e = encode(out.z_f, lengths);
  out.ctc_logits = ctc_logits(out.z_e);
  out.dec_logits = decoder_logits(out.z_e, lengths, y_in);
  return out;
}

std::pair<torch::Tensor, torch::Tensor> teacher_forcing_pair(const std::vector<std::vector<int>>& targets,
                                                             int vocab_size) {
  const SpecialIds sp;
  std::size_t max_len = 0;
  for (const auto& t : targets) max_len = std::max(max_len, t.size());
  const auto batch = static_cast<std::int64_t>(targets.size());
  const auto width = static_cast<std::int64_t>(max_len + 1);
  auto y_in = torch::full({batch, width}, sp.pad, torch::kInt64);
  auto y_out = torch::full({batch, width}, sp.pad, torch::kInt64);
  auto in_a = y_in.accessor<std::int64_t, 2>();
  auto out_a = y_out.accessor<std::int64_t, 2>();
  for (std::int64_t b = 0; b < batch; ++b) {
    const auto& t = targets[static_cast<std::size_t>(b)];
    in_a[b][0] = sp.sos;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i] < 0 || t[i] >= vocab_size) throw ShapeError(fmt::format("token id {} outside [0, {})", t[i], vocab_size));
      in_a[b][static_cast<std::int64_t>(i + 1)] = t[i];
      out_a[b][static_cast<std::int64_t>(i)] = t[i];
    }
    out_a[b][static_cast<std::int64_t>(t.size())] = sp.eos;
  }
  return {y_in, y_out};
}

VsrLoss VsrModelImpl::loss(const torch::Tensor& frames, const torch::Tensor& lengths,
                           const std::vector<std::vector<int>>& targets) {
  const SpecialIds sp;
  auto [y_in, y_out] = teacher_forcing_pair(targets, cfg_.vocab_size);
  auto f = features(frames, lengths, y_in);

  auto ctc = ctc_loss(torch::log_softmax(f.ctc_logits, -1), lengths, targets, sp.blank).mean();

  auto logp = torch::log_softmax(f.dec_logits, -1);
  auto valid = y_out.ne(sp.pad);
  auto nll = -logp.gather(2, y_out.clamp_min(0).unsqueeze(2)).squeeze(2);
  nll = nll.masked_fill(~valid, 0.0);
  auto ce = (nll.sum(1) / valid.sum(1).to(nll.dtype())).mean();

  return {joint_loss(ce, ctc, cfg_.ctc_weight), ctc, ce};
}

}  // namespace svsr::vsr
