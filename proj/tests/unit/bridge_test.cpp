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

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "standins.hpp"
#include "svsr/bridge/perceptual.hpp"
#include "svsr/common/error.hpp"

namespace svsr::bridge {
namespace {

TEST(FeatureDistance, IdenticalIsZeroAndShapesChecked) {
  const auto z = torch::randn({2, 5, 8});
  EXPECT_EQ(feature_distance(z, z).item<double>(), 0.0);
  EXPECT_NEAR(feature_distance(torch::zeros({3, 4}), torch::full({3, 4}, 0.25)).item<double>(), 0.25, 1e-7);
  EXPECT_THROW(feature_distance(z, torch::randn({2, 4, 8})), ShapeError);
}

TEST(LogitsKl, PointMassAgainstUniformIsLogTwo) {
  // softmax([40, 0]) is (1, 0) to double precision
  const auto real = torch::tensor({40.0, 0.0}, torch::kDouble).view({1, 1, 2});
  const auto synth = torch::zeros({1, 1, 2}, torch::kDouble);
  EXPECT_NEAR(logits_kl(real, synth).item<double>(), std::log(2.0), 1e-9);
}

TEST(LogitsKl, SelfDivergenceZeroAndNonnegative) {
  torch::manual_seed(3);
  for (int i = 0; i < 50; ++i) {
    const auto a = torch::randn({2, 4, 7}, torch::kDouble) * 3;
    const auto b = torch::randn({2, 4, 7}, torch::kDouble) * 3;
    EXPECT_NEAR(logits_kl(a, a).item<double>(), 0.0, 1e-12);
    EXPECT_GE(logits_kl(a, b).item<double>(), 0.0);
  }
}

TEST(LogitsKl, MaskedPositionsIgnored) {
  const auto a = torch::randn({1, 3, 5}, torch::kDouble);
  auto b = a.clone();
  b[0][2] += torch::randn({5}, torch::kDouble) * 4;
  const auto valid = torch::tensor({true, true, false}).view({1, 3});
  EXPECT_NEAR(logits_kl(a, b, valid).item<double>(), 0.0, 1e-12);
  EXPECT_GT(logits_kl(a, b).item<double>(), 0.0);
}

TEST(Combine, WeightedSum) {
  const auto v = torch::tensor(0.013, torch::kDouble), l = torch::tensor(0.42, torch::kDouble);
  const auto t = combine({250.0, 10.0}, v, l);
  EXPECT_NEAR(t.total.item<double>(), 250.0 * 0.013 + 10.0 * 0.42, 1e-12);
  EXPECT_EQ(t.visual.item<double>(), 0.013);
  EXPECT_EQ(combine({0.0, 0.0}, v, l).total.item<double>(), 0.0);
  EXPECT_TRUE(PerceptualWeights{}.inert());
}

TEST(PerceptualLoss, IdenticalClipsGiveZero) {
  torch::manual_seed(4);
  PerceptualLoss loss(vsr::VsrModel(svsr::testing::micro_vsr_config()), {250.0, 10.0});
  const auto clip = torch::rand({1, 4, 96, 96});
  const auto t = loss(clip, clip, {{5, 6, 7}});
  EXPECT_EQ(t.visual.item<double>(), 0.0);
  EXPECT_NEAR(t.logits.item<double>(), 0.0, 1e-6);
  EXPECT_NEAR(t.total.item<double>(), 0.0, 1e-4);
}

TEST(PerceptualLoss, RecognizerFrozenAndGradientReachesSynth) {
  torch::manual_seed(5);
  PerceptualLoss loss(vsr::VsrModel(svsr::testing::micro_vsr_config()), {250.0, 10.0});
  const auto real = torch::rand({1, 3, 96, 96});
  auto synth = torch::rand({1, 3, 96, 96}).requires_grad_(true);
  const auto t = loss(real, synth, {{5, 6}});
  EXPECT_GT(t.total.item<double>(), 0.0);
  t.total.backward();
  for (const auto& p : loss.recognizer()->parameters()) {
    EXPECT_FALSE(p.requires_grad());
    EXPECT_FALSE(p.grad().defined());
  }
  ASSERT_TRUE(synth.grad().defined());
  EXPECT_GT(synth.grad().abs().sum().item<double>(), 0.0);
  EXPECT_FALSE(loss.recognizer()->is_training());
}

TEST(PerceptualLoss, FrameCountMismatchRejected) {
  PerceptualLoss loss(vsr::VsrModel(svsr::testing::micro_vsr_config()), {1.0, 0.0});
  EXPECT_THROW(loss(torch::rand({1, 3, 96, 96}), torch::rand({1, 4, 96, 96}), {{5}}), ShapeError);
  EXPECT_THROW(PerceptualLoss(vsr::VsrModel(svsr::testing::micro_vsr_config()), {-1.0, 0.0}), ConfigError);
}

TEST(PerceptualLoss, DirectionalGradientMatchesDifferences) {
  torch::manual_seed(6);
  vsr::VsrModel model(svsr::testing::micro_vsr_config());
  model->to(torch::kDouble);
  PerceptualLoss loss(model, {250.0, 10.0});
  const auto real = torch::rand({1, 2, 96, 96}, torch::kDouble);
  const auto synth = torch::rand({1, 2, 96, 96}, torch::kDouble);
  auto f = [&](const torch::Tensor& x) { return loss(real, x, {{5, 6}}).total; };
  EXPECT_LE(oracle::directional_check(f, synth, 6, 7), 1e-4);
}

}  // namespace
}  // namespace svsr::bridge
