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

#include "svsr/bridge/perceptual.hpp"

#include <fmt/format.h>

#include "svsr/common/error.hpp"
#include "svsr/tokenizer/bpe.hpp"

namespace svsr::bridge {

torch::Tensor feature_distance(const torch::Tensor& z_real, const torch::Tensor& z_synth) {
  if (z_real.sizes() != z_synth.sizes()) throw ShapeError("feature shapes differ");
  return (z_real - z_synth).abs().mean();
}

torch::Tensor logits_kl(const torch::Tensor& real_logits, const torch::Tensor& synth_logits, const torch::Tensor& valid) {
  if (real_logits.sizes() != synth_logits.sizes()) throw ShapeError("logit shapes differ");
  auto p = torch::softmax(real_logits, -1);
  auto q = torch::softmax(synth_logits, -1).clamp_min(kKlEpsilon);
  auto kl = (torch::xlogy(p, p) - p * torch::log(q)).sum(-1);
  if (!valid.defined()) return kl.mean();
  auto m = valid.to(kl.dtype());
  return (kl * m).sum() / m.sum().clamp_min(1.0);
}

PerceptualTerms combine(const PerceptualWeights& w, const torch::Tensor& visual, const torch::Tensor& logits) {
  return {visual, logits, w.visual * visual + w.logits * logits};
}

PerceptualLoss::PerceptualLoss(vsr::VsrModel recognizer, PerceptualWeights weights)
    : model_(std::move(recognizer)), weights_(weights) {
  if (weights_.visual < 0.0 || weights_.logits < 0.0) throw ConfigError("perceptual weights must be nonnegative");
  for (auto& p : model_->parameters()) p.set_requires_grad(false);
  model_->eval();
}

PerceptualTerms PerceptualLoss::operator()(const torch::Tensor& real, const torch::Tensor& synth,
                                           const std::vector<std::vector<int>>& transcripts) {
  if (real.dim() != 4 || real.sizes() != synth.sizes())
    throw ShapeError(fmt::format("real and synthetic clips differ in frame count or shape ({} vs {} frames)",
                                 real.dim() > 1 ? real.size(1) : 0, synth.dim() > 1 ? synth.size(1) : 0));
  model_->eval();
  auto [y_in, y_out] = vsr::teacher_forcing_pair(transcripts, model_->config().vocab_size);
  auto lengths = torch::full({real.size(0)}, real.size(1), torch::kInt64);
  const tokenizer::SpecialIds sp;
  auto valid = y_out.ne(sp.pad);

  torch::Tensor zf_r, logits_r;
  {
    torch::NoGradGuard guard;
    zf_r = model_->frontend(real);
    logits_r = model_->decoder_logits(model_->encode(zf_r, lengths), lengths, y_in);
  }
  auto zf_s = model_->frontend(synth);
  auto logits_s = model_->decoder_logits(model_->encode(zf_s, lengths), lengths, y_in);
  return combine(weights_, feature_distance(zf_r, zf_s), logits_kl(logits_r, logits_s, valid));
}

}  // namespace svsr::bridge
