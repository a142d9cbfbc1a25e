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

#include "svsr/lipgen/losses.hpp"

#include <cmath>

#include <fmt/format.h>

#include "svsr/common/error.hpp"

namespace svsr::lipgen {

void check_probabilities(const torch::Tensor& probs, const char* what) {
  if (probs.numel() == 0) throw ShapeError(fmt::format("{}: empty discriminator output", what));
  const auto d = probs.detach();
  if (d.isnan().any().item<bool>() || (d < 0).any().item<bool>() || (d > 1).any().item<bool>())
    throw NumericError(fmt::format("{}: discriminator output outside [0, 1]", what));
}

torch::Tensor discriminator_objective(const torch::Tensor& d_real, const torch::Tensor& d_fake) {
  check_probabilities(d_real, "real batch");
  check_probabilities(d_fake, "fake batch");
  auto real = d_real.clamp(kProbEpsilon, 1.0 - kProbEpsilon);
  auto fake = d_fake.clamp(kProbEpsilon, 1.0 - kProbEpsilon);
  return torch::log(real).mean() + torch::log1p(-fake).mean();
}

torch::Tensor generator_adversarial_term(const torch::Tensor& d_fake) {
  check_probabilities(d_fake, "generated batch");
  return -torch::log(d_fake.clamp(kProbEpsilon, 1.0 - kProbEpsilon)).mean();
}

torch::Tensor reconstruction_loss(const torch::Tensor& real, const torch::Tensor& fake) {
  if (real.sizes() != fake.sizes())
    throw ShapeError(fmt::format("reconstruction inputs differ in shape: {} vs {}", c10::str(real.sizes()),
                                 c10::str(fake.sizes())));
  return (real - fake).abs().mean();
}

double reconstruction_loss(const media::VideoClip& real, const media::VideoClip& fake) {
  if (real.num_frames != fake.num_frames || real.height != fake.height || real.width != fake.width)
    throw ShapeError("reconstruction clips differ in shape");
  double sum = 0.0;
  for (std::size_t i = 0; i < real.pixels.size(); ++i)
    sum += std::fabs(static_cast<double>(real.pixels[i]) - static_cast<double>(fake.pixels[i])) / 255.0;
  return real.pixels.empty() ? 0.0 : sum / static_cast<double>(real.pixels.size());
}

}  // namespace svsr::lipgen
