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

#include <random>

#include <gtest/gtest.h>

#include "helpers.hpp"
#include "oracles.hpp"
#include "standins.hpp"
#include "svsr/common/error.hpp"
#include "svsr/lipgen/generate.hpp"
#include "svsr/lipgen/losses.hpp"
#include "svsr/lipgen/networks.hpp"
#include "svsr/lipgen/train.hpp"
#include "svsr/media/rotation.hpp"
#include "svsr/nn/checkpoint.hpp"

namespace svsr::lipgen {
namespace {

using svsr::testing::ConstantCritic;
using svsr::testing::MicroFrameCritic;
using svsr::testing::MicroSequenceCritic;

LamModelConfig micro_lam() {
  LamModelConfig c;
  c.width = 0.0625;
  c.decoder_convs_per_level = 1;
  return c;
}

media::SpeechChunks random_chunks(std::size_t n, unsigned seed) {
  media::SpeechChunks c;
  c.count = n;
  c.window = 3200;
  std::mt19937 gen(seed);
  std::uniform_real_distribution<float> u(-0.5f, 0.5f);
  c.samples.resize(n * 3200);
  for (auto& s : c.samples) s = u(gen);
  return c;
}

media::Image random_face(unsigned seed) {
  media::Image img;
  img.width = img.height = 96;
  img.pixels.resize(96 * 96);
  std::mt19937 gen(seed);
  for (auto& p : img.pixels) p = static_cast<std::uint8_t>(gen());
  return img;
}

// ----- generator contract

TEST(Generate, FrameCountFollowsChunkCount) {
  torch::manual_seed(0);
  Generator g(micro_lam());
  for (std::size_t n : {1u, 5u, 75u}) {
    const auto clip = generate(g, random_face(1), random_chunks(n, 2), media::RotationSequence::identity(n));
    EXPECT_EQ(clip.num_frames, n);
    EXPECT_EQ(clip.width, 96);
    EXPECT_EQ(clip.height, 96);
    EXPECT_NO_THROW(clip.validate());
  }
}

TEST(Generate, BitIdenticalAcrossCalls) {
  torch::manual_seed(0);
  Generator g(micro_lam());
  const auto face = random_face(3);
  const auto chunks = random_chunks(6, 4);
  const auto a = generate(g, face, chunks, media::RotationSequence::identity(6));
  const auto b = generate(g, face, chunks, media::RotationSequence::identity(6));
  EXPECT_EQ(a, b);
}

TEST(Generate, LengthMismatchReportsBoth) {
  torch::manual_seed(0);
  Generator g(micro_lam());
  try {
    generate(g, random_face(1), random_chunks(4, 2), media::RotationSequence::identity(3));
    FAIL();
  } catch (const ShapeError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find('4'), std::string::npos) << msg;
    EXPECT_NE(msg.find('3'), std::string::npos) << msg;
  }
}

TEST(Generate, RotationsChangeTheOutput) {
  torch::manual_seed(0);
  Generator g(micro_lam());
  g->eval();
  torch::NoGradGuard ng;
  const auto first = torch::rand({1, 1, 96, 96});
  const auto chunks = torch::randn({1, 4, 3200}) * 0.1;
  auto rot = torch::eye(3).flatten().repeat({1, 4, 1});
  const double c = std::cos(0.4), s = std::sin(0.4);
  rot[0][2] = torch::tensor({c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0});
  const auto out = g->forward(first, chunks, rot);
  const auto permuted = g->forward(first, chunks, rot.index_select(1, torch::tensor({0, 2, 1, 3})));
  EXPECT_GT((out - permuted).abs().max().item<double>(), 0.0);
  EXPECT_GE(out.min().item<double>(), 0.0);
  EXPECT_LE(out.max().item<double>(), 1.0);
}

TEST(Generator, EveryParameterReceivesGradient) {
  torch::manual_seed(1);
  Generator g(micro_lam());
  g->train();
  const auto out = g->forward(torch::rand({2, 1, 96, 96}), torch::randn({2, 3, 3200}) * 0.1,
                              torch::eye(3).flatten().repeat({2, 3, 1}));
  reconstruction_loss(torch::rand({2, 3, 96, 96}), out).backward();
  for (const auto& p : g->named_parameters()) {
    ASSERT_TRUE(p.value().grad().defined()) << p.key();
    EXPECT_GT(p.value().grad().abs().max().item<double>(), 0.0) << p.key();
  }
}

TEST(Discriminators, OutputsAreProbabilities) {
  torch::manual_seed(2);
  FrameDiscriminator d_img(micro_lam());
  SequenceDiscriminator d_seq(micro_lam());
  const auto p = d_img->forward(torch::rand({3, 1, 96, 96}), torch::rand({3, 1, 96, 96}));
  const auto q = d_seq->forward(torch::rand({2, 5, 96, 96}));
  EXPECT_EQ(p.sizes(), (std::vector<std::int64_t>{3}));
  EXPECT_EQ(q.sizes(), (std::vector<std::int64_t>{2}));
  for (const auto& t : {p, q}) {
    EXPECT_GT(t.min().item<double>(), 0.0);
    EXPECT_LT(t.max().item<double>(), 1.0);
  }
}

// ----- adversarial objectives

TEST(AdversarialObjective, UninformativeCriticGivesTwoLogHalf) {
  const auto half = torch::full({4}, 0.5, torch::kDouble);
  EXPECT_NEAR(discriminator_objective(half, half).item<double>(), 2 * std::log(0.5), 1e-9);
  ConstantCritic c(0.5);
  const auto frames = torch::rand({4, 1, 8, 8}, torch::kDouble);
  const auto first = torch::rand({1, 1, 8, 8}, torch::kDouble);
  EXPECT_NEAR(frame_disc_objective(c, frames, frames, first).item<double>(), 2 * std::log(0.5), 1e-9);
  EXPECT_NEAR(seq_disc_objective(c, torch::rand({2, 3, 8, 8}, torch::kDouble), torch::rand({2, 3, 8, 8}, torch::kDouble))
                  .item<double>(),
              2 * std::log(0.5), 1e-9);
}

TEST(AdversarialObjective, PerfectCriticApproachesZero) {
  const auto v = discriminator_objective(torch::ones({4}, torch::kDouble), torch::zeros({4}, torch::kDouble));
  EXPECT_LE(v.item<double>(), 0.0);
  EXPECT_NEAR(v.item<double>(), 0.0, 1e-6);
}

TEST(AdversarialObjective, HandSetBatchOracle) {
  const std::vector<double> real = {0.9, 0.6, 0.75, 0.2}, fake = {0.1, 0.3, 0.45, 0.8};
  double want = 0;
  for (double r : real) want += std::log(r) / 4;
  for (double f : fake) want += std::log(1 - f) / 4;
  EXPECT_NEAR(discriminator_objective(torch::tensor(real, torch::kDouble), torch::tensor(fake, torch::kDouble)).item<double>(),
              want, 1e-6);
}

TEST(AdversarialObjective, NanProbabilitiesRejected) {
  const auto bad = torch::tensor({0.5, std::nan("")}, torch::kDouble);
  EXPECT_THROW(discriminator_objective(bad, torch::full({2}, 0.5, torch::kDouble)), NumericError);
}

TEST(GeneratorTerm, KnownValuesAndBatchMean) {
  EXPECT_NEAR(generator_adversarial_term(torch::ones({3}, torch::kDouble)).item<double>(), 0.0, 1e-6);
  EXPECT_NEAR(generator_adversarial_term(torch::full({3}, 0.5, torch::kDouble)).item<double>(), std::log(2.0), 1e-12);
  const std::vector<double> d = {0.2, 0.7, 0.35, 0.9, 0.05};
  double want = 0;
  for (double x : d) want -= std::log(x) / 5;
  EXPECT_NEAR(generator_adversarial_term(torch::tensor(d, torch::kDouble)).item<double>(), want, 1e-6);
  ConstantCritic c(0.5);
  const auto t = generator_adv_terms(c, c, torch::rand({2, 1, 8, 8}), torch::rand({1, 1, 8, 8}), torch::rand({1, 2, 8, 8}));
  EXPECT_NEAR(t.frame.item<double>(), std::log(2.0), 1e-6);
  EXPECT_NEAR(t.sequence.item<double>(), std::log(2.0), 1e-6);
}

// ----- reconstruction and total

TEST(Reconstruction, KnownValues) {
  const auto x = torch::rand({2, 3, 8, 8}, torch::kDouble);
  EXPECT_EQ(reconstruction_loss(x, x).item<double>(), 0.0);
  EXPECT_EQ(reconstruction_loss(torch::ones({1, 2, 4, 4}), torch::zeros({1, 2, 4, 4})).item<double>(), 1.0);
  const auto y = torch::rand({2, 3, 8, 8}, torch::kDouble);
  double want = 0;
  auto xa = x.accessor<double, 4>(), ya = y.accessor<double, 4>();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 3; ++b)
      for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) want += std::fabs(xa[a][b][i][j] - ya[a][b][i][j]);
  want /= 2 * 3 * 8 * 8;
  EXPECT_NEAR(reconstruction_loss(x, y).item<double>(), want, 1e-7);
}

TEST(Reconstruction, ClipOverload) {
  auto a = media::VideoClip::blank(2, 0), b = media::VideoClip::blank(2, 255);
  EXPECT_DOUBLE_EQ(reconstruction_loss(a, b), 1.0);
  EXPECT_DOUBLE_EQ(reconstruction_loss(a, a), 0.0);
  EXPECT_THROW(reconstruction_loss(a, media::VideoClip::blank(3)), ShapeError);
}

TEST(TotalLoss, BaselineAndOracle) {
  const auto w = LamLossWeights::preset("baseline");
  EXPECT_EQ(lam_total_loss(w, 0.0, 0.0, 0.0, 0.0), 0.0);
  EXPECT_EQ(lam_total_loss(w, 1.0, 1.0, 1.0, 0.0), 301.2);
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> u(0, 5);
  for (int i = 0; i < 50; ++i) {
    LamLossWeights r;
    r.img = u(gen);
    r.seq = u(gen);
    r.rec = u(gen);
    const double a = u(gen), b = u(gen), c = u(gen), v = u(gen);
    EXPECT_NEAR(lam_total_loss(r, a, b, c, v), r.img * a + r.seq * b + r.rec * c + v, 1e-12);
    const auto t = lam_total_loss(r, torch::tensor(a, torch::kDouble), torch::tensor(b, torch::kDouble),
                                  torch::tensor(c, torch::kDouble), torch::tensor(v, torch::kDouble));
    EXPECT_NEAR(t.item<double>(), r.img * a + r.seq * b + r.rec * c + v, 1e-12);
  }
}

TEST(LossWeights, Presets) {
  const auto b = LamLossWeights::preset("Baseline");
  EXPECT_EQ(b.img, 1.0);
  EXPECT_EQ(b.seq, 0.2);
  EXPECT_EQ(b.rec, 300.0);
  EXPECT_EQ(b.visual, 0.0);
  EXPECT_EQ(b.logits, 0.0);
  EXPECT_FALSE(b.uses_recognizer());
  const auto vl = LamLossWeights::preset("lrs3-vsr-vl");
  EXPECT_EQ(vl.visual, 250.0);
  EXPECT_EQ(vl.logits, 10.0);
  EXPECT_EQ(LamLossWeights::preset("lrs3-vsr-v").logits, 0.0);
  EXPECT_EQ(LamLossWeights::preset("lrs3-vsr-v").visual, 250.0);
  EXPECT_EQ(LamLossWeights::preset("lrs3-vsr-l").visual, 0.0);
  EXPECT_EQ(LamLossWeights::preset("lrs3-vsr-l").logits, 10.0);
  EXPECT_EQ(LamLossWeights::preset("AVoX").visual, 500.0);
  EXPECT_EQ(LamLossWeights::preset("avox").logits, 10.0);
  EXPECT_THROW(LamLossWeights::preset("nope"), ConfigError);
}

// ----- gradients at 64-bit on micro tensors

TEST(LossGradients, MatchCentralDifferences) {
  torch::manual_seed(5);
  MicroFrameCritic fc(64);
  MicroSequenceCritic sc(2 * 64);
  fc->to(torch::kDouble);
  sc->to(torch::kDouble);
  const auto first = torch::rand({1, 1, 8, 8}, torch::kDouble);
  const auto real = torch::rand({1, 2, 8, 8}, torch::kDouble);

  auto frame_adv = [&](const std::vector<torch::Tensor>& x) {
    return frame_disc_objective(fc, real.view({2, 1, 8, 8}), x[0].view({2, 1, 8, 8}), first);
  };
  auto seq_adv = [&](const std::vector<torch::Tensor>& x) { return seq_disc_objective(sc, real, x[0]); };
  auto rec = [&](const std::vector<torch::Tensor>& x) { return reconstruction_loss(real, x[0]); };
  auto total = [&](const std::vector<torch::Tensor>& x) {
    const auto t = generator_adv_terms(fc, sc, x[0].view({2, 1, 8, 8}), first, x[0]);
    return lam_total_loss(LamLossWeights::preset("baseline"), t.frame, t.sequence, reconstruction_loss(real, x[0]),
                          torch::zeros({}, torch::kDouble));
  };
  const auto fake = (torch::rand({1, 2, 8, 8}, torch::kDouble) * 0.8 + 0.1);
  EXPECT_LE(oracle::gradient_check(frame_adv, {fake}), 1e-4);
  EXPECT_LE(oracle::gradient_check(seq_adv, {fake}), 1e-4);
  EXPECT_LE(oracle::gradient_check(rec, {fake}), 1e-4);
  EXPECT_LE(oracle::gradient_check(total, {fake}), 1e-4);
  // critic parameters too
  auto w = fc->l1->weight;
  auto frame_adv_params = [&](const std::vector<torch::Tensor>& x) {
    const auto h = torch::tanh(torch::nn::functional::linear(
        torch::cat({fake.view({2, 64}), first.flatten(1).expand({2, 64})}, 1), x[0], fc->l1->bias));
    const auto fake_p = torch::sigmoid(fc->l2(h)).squeeze(1);
    const auto hr = torch::tanh(torch::nn::functional::linear(
        torch::cat({real.view({2, 64}), first.flatten(1).expand({2, 64})}, 1), x[0], fc->l1->bias));
    const auto real_p = torch::sigmoid(fc->l2(hr)).squeeze(1);
    return discriminator_objective(real_p, fake_p);
  };
  EXPECT_LE(oracle::gradient_check(frame_adv_params, {w.detach()}), 1e-4);
}

// ----- training

TEST(LamTrainer, RecognizerRequiredForPerceptualWeights) {
  auto weights = LamLossWeights::preset("lrs3-vsr-vl");
  EXPECT_THROW(LamTrainer(micro_lam(), weights, LamTrainOptions{}, svsr::testing::toy_lam_samples(2, 1)), ConfigError);
}

TEST(LamTrainer, BaselineRunsWithoutRecognizerAndKeepsFrameCounts) {
  LamTrainOptions o;
  o.seed = 3;
  o.window = 8;
  LamTrainer t(micro_lam(), LamLossWeights::preset("baseline"), o, svsr::testing::toy_lam_samples(3, 1));
  for (int i = 0; i < 3; ++i) {
    const auto s = t.step();
    EXPECT_TRUE(s.frame_count_ok);
    EXPECT_TRUE(std::isfinite(s.total));
    EXPECT_GT(s.frames, 0);
  }
  EXPECT_EQ(t.steps_done(), 3);
}

TEST(LamTrainer, ResumeReproducesNextStep) {
  LamTrainOptions o;
  o.seed = 11;
  o.window = 8;
  const auto data = svsr::testing::toy_lam_samples(3, 2);
  LamTrainer a(micro_lam(), LamLossWeights::preset("baseline"), o, data);
  a.step();
  a.step();
  svsr::testing::TempDir tmp;
  nn::save_checkpoint(a.checkpoint(), tmp / "lam.ckpt");
  const auto next = a.step();

  LamTrainer b(micro_lam(), LamLossWeights::preset("baseline"), o, data);
  b.resume(nn::load_checkpoint(tmp / "lam.ckpt"));
  EXPECT_EQ(b.steps_done(), 2);
  const auto again = b.step();
  EXPECT_EQ(again.rec, next.rec);
  EXPECT_EQ(again.d_img, next.d_img);
  EXPECT_EQ(again.d_seq, next.d_seq);
  EXPECT_EQ(again.total, next.total);
}

TEST(LamTrainer, CheckpointBuildsGenerator) {
  LamTrainOptions o;
  o.window = 4;
  LamTrainer t(micro_lam(), LamLossWeights::preset("baseline"), o, svsr::testing::toy_lam_samples(2, 1));
  t.step();
  auto g = load_generator(t.checkpoint());
  const auto face = random_face(5);
  const auto chunks = random_chunks(3, 6);
  EXPECT_EQ(generate(g, face, chunks, media::RotationSequence::identity(3)),
            generate(t.generator(), face, chunks, media::RotationSequence::identity(3)));
}

TEST(LamTrainer, ReconstructionTrendsDownOverTwoHundredSteps) {
  LamTrainOptions o;
  o.seed = 4;
  o.window = 12;
  LamTrainer t(micro_lam(), LamLossWeights::preset("baseline"), o, svsr::testing::toy_lam_samples(5, 3));
  std::vector<double> block_means;
  double acc = 0;
  for (int i = 1; i <= 200; ++i) {
    const auto s = t.step();
    ASSERT_TRUE(s.frame_count_ok);
    acc += s.rec;
    if (i % 10 == 0) {
      block_means.push_back(acc / 10);
      acc = 0;
    }
  }
  // 10-step smoothing: least-squares slope of the block means is negative and
  // the last block sits below the first.
  const double n = static_cast<double>(block_means.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < block_means.size(); ++i) {
    sx += i;
    sy += block_means[i];
    sxx += static_cast<double>(i * i);
    sxy += i * block_means[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  EXPECT_LT(slope, 0.0);
  EXPECT_LT(block_means.back(), block_means.front());
}

}  // namespace
}  // namespace svsr::lipgen
