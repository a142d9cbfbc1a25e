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
#include "svsr/common/error.hpp"
#include "svsr/nn/checkpoint.hpp"
#include "svsr/nn/tensors.hpp"
#include "svsr/vsr/averaging.hpp"
#include "svsr/vsr/ctc.hpp"
#include "svsr/vsr/model.hpp"
#include "svsr/vsr/schedule.hpp"
#include "svsr/vsr/search.hpp"
#include "svsr/vsr/train.hpp"

namespace svsr::vsr {
namespace {

VsrConfig micro_config(int encoder_depth = 1) {
  VsrConfig c;
  c.vocab_size = 12;
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

VsrModel micro_model(int encoder_depth = 1, std::uint64_t seed = 1) {
  torch::manual_seed(seed);
  VsrModel m(micro_config(encoder_depth));
  m->eval();
  return m;
}

torch::Tensor lengths_of(std::int64_t T) { return torch::full({1}, T, torch::kLong); }

// ----- front-end

TEST(Frontend, ShapesForOneAndSeventyFiveFrames) {
  auto m = micro_model();
  torch::NoGradGuard ng;
  EXPECT_EQ(m->frontend(torch::rand({1, 1, 96, 96})).sizes(), (std::vector<std::int64_t>{1, 1, 8}));
  EXPECT_EQ(m->frontend(torch::rand({1, 75, 96, 96})).sizes(), (std::vector<std::int64_t>{1, 75, 8}));
}

TEST(Frontend, ConstantClipGivesConstantInteriorFeatures) {
  auto m = micro_model();
  torch::NoGradGuard ng;
  const auto z = m->frontend(torch::full({1, 12, 96, 96}, 0.6))[0];
  // temporal kernel 5: frames 2..T-3 see no padding
  for (std::int64_t t = 3; t <= 9; ++t) EXPECT_LT((z[t] - z[2]).abs().max().item<double>(), 1e-5) << t;
}

TEST(Frontend, WrongSpatialSizeRejected) {
  auto m = micro_model();
  EXPECT_THROW(m->frontend(torch::rand({1, 2, 64, 64})), ShapeError);
}

// ----- encoder

TEST(Encoder, ShapePreserved) {
  auto m = micro_model(2);
  torch::NoGradGuard ng;
  for (std::int64_t T : {1, 7, 75}) {
    const auto z = m->encode(torch::randn({1, T, 8}), lengths_of(T));
    EXPECT_EQ(z.sizes(), (std::vector<std::int64_t>{1, T, 16}));
    EXPECT_TRUE(torch::isfinite(z).all().item<bool>());
  }
}

TEST(Encoder, ZeroDepthIsAffineProjection) {
  auto m = micro_model(0);
  torch::NoGradGuard ng;
  const auto x = torch::randn({1, 5, 8}, torch::kDouble);
  const auto y = torch::randn({1, 5, 8}, torch::kDouble);
  m->to(torch::kDouble);
  const double a = 0.3;
  const auto lhs = m->encode(a * x + (1 - a) * y, lengths_of(5));
  const auto rhs = a * m->encode(x, lengths_of(5)) + (1 - a) * m->encode(y, lengths_of(5));
  EXPECT_LT((lhs - rhs).abs().max().item<double>(), 1e-12);
  // frames are mapped independently
  const auto single = m->encode(x.slice(1, 2, 3), lengths_of(1));
  EXPECT_LT((m->encode(x, lengths_of(5)).slice(1, 2, 3) - single).abs().max().item<double>(), 1e-12);
}

TEST(Encoder, FrameOrderMatters) {
  auto m = micro_model(1);
  torch::NoGradGuard ng;
  const auto x = torch::randn({1, 9, 8});
  const auto perm = torch::randperm(9);
  const auto of_permuted = m->encode(x.index_select(1, perm), lengths_of(9));
  const auto permuted = m->encode(x, lengths_of(9)).index_select(1, perm);
  EXPECT_GT((of_permuted - permuted).abs().max().item<double>(), 1e-5);
}

// ----- decoder

TEST(Decoder, FactorisationAndCausality) {
  auto m = micro_model();
  m->to(torch::kDouble);
  torch::NoGradGuard ng;
  const auto z_e = m->encode(torch::randn({1, 6, 8}, torch::kDouble), lengths_of(6));
  const std::vector<std::int64_t> y = {3, 7, 9, 5, 11, 6};  // sos then tokens
  const auto y_in = torch::tensor(y).unsqueeze(0);
  const auto lp = torch::log_softmax(m->decoder_logits(z_e, lengths_of(6), y_in), -1)[0];
  double joint = 0.0, stepwise = 0.0;
  const std::vector<std::int64_t> next = {7, 9, 5, 11, 6, 4};
  for (std::size_t i = 0; i < next.size(); ++i) {
    joint += lp[static_cast<std::int64_t>(i)][next[i]].item<double>();
    const auto prefix = y_in.slice(1, 0, static_cast<std::int64_t>(i) + 1);
    const auto step = torch::log_softmax(m->decoder_logits(z_e, lengths_of(6), prefix), -1)[0][-1];
    stepwise += step[next[i]].item<double>();
  }
  EXPECT_NEAR(joint, stepwise, 1e-6);

  const auto base = m->decoder_logits(z_e, lengths_of(6), y_in)[0];
  for (std::int64_t j = 1; j < 6; ++j) {
    auto altered = y_in.clone();
    altered[0][j] = (altered[0][j].item<std::int64_t>() + 3) % 12;
    const auto out = m->decoder_logits(z_e, lengths_of(6), altered)[0];
    for (std::int64_t i = 0; i < 6; ++i) {
      const double diff = (out[i] - base[i]).abs().max().item<double>();
      if (i < j)
        EXPECT_EQ(diff, 0.0) << "position " << i << " changed after altering " << j;
      else
        EXPECT_GT(diff, 0.0);
    }
  }
}

TEST(Decoder, SosOnlyGivesOneRowAndRejectsBadIds) {
  auto m = micro_model();
  torch::NoGradGuard ng;
  const auto z_e = m->encode(torch::randn({1, 4, 8}), lengths_of(4));
  const auto row = m->decoder_logits(z_e, lengths_of(4), torch::full({1, 1}, 3, torch::kLong));
  EXPECT_EQ(row.sizes(), (std::vector<std::int64_t>{1, 1, 12}));
  EXPECT_THROW(m->decoder_logits(z_e, lengths_of(4), torch::full({1, 2}, 12, torch::kLong)), Error);
}

TEST(Decoder, SoftmaxRowsNormalise) {
  auto m = micro_model();
  torch::NoGradGuard ng;
  const auto b = m->features(torch::rand({2, 5, 96, 96}), torch::tensor({5, 3}), torch::tensor({{3, 6, 7}, {3, 8, 1}}));
  for (const auto& logits : {b.dec_logits, b.ctc_logits}) {
    EXPECT_TRUE(torch::isfinite(logits).all().item<bool>());
    EXPECT_LT((torch::softmax(logits.to(torch::kDouble), -1).sum(-1) - 1).abs().max().item<double>(), 1e-6);
  }
  EXPECT_EQ(b.ctc_logits.size(-1), 12);
}

// ----- ctc

TEST(Ctc, SingleFrameUniform) {
  const auto logits = torch::zeros({1, 2}, torch::kDouble);
  EXPECT_NEAR(ctc_loss(logits, {1}).item<double>(), std::log(2.0), 1e-12);
}

TEST(Ctc, EmptyTargetIsAllBlank) {
  // p(blank) = 0.7 on both frames
  const double p = 0.7;
  auto logits = torch::tensor({{std::log(p), std::log(0.1), std::log(0.2)}, {std::log(p), std::log(0.2), std::log(0.1)}},
                              torch::kDouble);
  EXPECT_NEAR(ctc_loss(logits, {}).item<double>(), -2 * std::log(p), 1e-12);
}

TEST(Ctc, MatchesExhaustiveEnumeration) {
  std::mt19937 gen(5);
  std::normal_distribution<double> nd(0, 2);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<double>> logits(5, std::vector<double>(4));
    for (auto& r : logits)
      for (auto& v : r) v = nd(gen);
    const std::vector<int> target = {1 + static_cast<int>(gen() % 3), 1 + static_cast<int>(gen() % 3)};
    auto t = torch::zeros({5, 4}, torch::kDouble);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 4; ++j) t[i][j] = logits[i][j];
    const double want = oracle::ctc_brute_force(logits, target);
    EXPECT_NEAR(ctc_loss(t, target).item<double>(), want, 1e-6 * std::max(1.0, want));
  }
}

TEST(Ctc, InfeasibleTargetGivesSentinel) {
  const auto logits = torch::zeros({2, 4}, torch::kDouble);
  EXPECT_EQ(ctc_min_frames({1, 1}), 3);
  EXPECT_EQ(ctc_loss(logits, {1, 1}).item<double>(), kCtcInfeasibleLoss);
  EXPECT_EQ(ctc_loss(logits, {1, 2, 3}).item<double>(), kCtcInfeasibleLoss);
}

TEST(Ctc, BatchedRespectsInputLengths) {
  auto lp = torch::log_softmax(torch::randn({2, 6, 5}, torch::kDouble), -1);
  const auto losses = ctc_loss(lp, torch::tensor({6, 4}), {{1, 2}, {3}});
  EXPECT_NEAR(losses[0].item<double>(), ctc_loss(lp[0], {1, 2}).item<double>(), 1e-10);
  EXPECT_NEAR(losses[1].item<double>(), ctc_loss(lp[1].slice(0, 0, 4), {3}).item<double>(), 1e-10);
}

TEST(Ctc, GradientMatchesCentralDifference) {
  torch::manual_seed(2);
  const double err = oracle::gradient_check(
      [](const std::vector<torch::Tensor>& x) { return ctc_loss(x[0], {1, 2, 2}); }, {torch::randn({6, 4})});
  EXPECT_LE(err, 1e-4);
}

// ----- joint loss

TEST(JointLoss, Arithmetic) {
  EXPECT_DOUBLE_EQ(joint_loss(2.0, 5.0, 0.0), 2.0);
  EXPECT_DOUBLE_EQ(joint_loss(2.0, 5.0, 1.0), 5.0);
  EXPECT_NEAR(joint_loss(2.0, 5.0, 0.1), 2.3, 1e-12);
  std::mt19937 gen(1);
  std::uniform_real_distribution<double> u(0, 10), a(0, 1);
  for (int i = 0; i < 100; ++i) {
    const double ce = u(gen), ctc = u(gen), al = a(gen);
    const double j = joint_loss(ce, ctc, al);
    EXPECT_GE(j, std::min(ce, ctc) - 1e-12);
    EXPECT_LE(j, std::max(ce, ctc) + 1e-12);
  }
}

TEST(JointLoss, ModelLossCombinesTerms) {
  auto m = micro_model();
  m->train();
  const auto l = m->loss(torch::rand({2, 6, 96, 96}), torch::tensor({6, 5}), {{5, 6}, {7}});
  EXPECT_NEAR(l.total.item<double>(), 0.1 * l.ctc.item<double>() + 0.9 * l.ce.item<double>(), 1e-5);
}

TEST(TeacherForcing, PairsArePadded) {
  const auto [in, out] = teacher_forcing_pair({{7, 8}, {9}}, 12);
  EXPECT_TRUE(torch::equal(in, torch::tensor({{3, 7, 8}, {3, 9, 1}})));
  EXPECT_TRUE(torch::equal(out, torch::tensor({{7, 8, 4}, {9, 4, 1}})));
  EXPECT_THROW(teacher_forcing_pair({{12}}, 12), ShapeError);
}

// ----- search

NextTokenScorer table_scorer(std::uint64_t seed, int V) {
  return [seed, V](const std::vector<std::vector<int>>& prefixes) {
    std::vector<std::vector<double>> rows;
    for (const auto& p : prefixes) {
      std::uint64_t h = seed;
      for (int t : p) h = h * 1000003u + static_cast<std::uint64_t>(t) + 1;
      std::mt19937_64 gen(h);
      std::normal_distribution<double> nd(0, 2);
      std::vector<double> row(V);
      double z = 0;
      for (auto& r : row) z += std::exp(r = nd(gen));
      for (auto& r : row) r -= std::log(z);
      rows.push_back(row);
    }
    return rows;
  };
}

std::vector<int> greedy_reference(const NextTokenScorer& scorer, int max_len, double& logprob) {
  std::vector<int> prefix = {3};
  logprob = 0;
  // up to max_len tokens, then one more step in which only eos counts
  for (int step = 0; step <= max_len; ++step) {
    const auto row = scorer({prefix})[0];
    int best = -1;
    for (int v = 0; v < static_cast<int>(row.size()); ++v) {
      if (v == 0 || v == 1 || v == 3) continue;
      if (best < 0 || row[v] > row[best]) best = v;
    }
    if (best == 4) {
      logprob += row[best];
      break;
    }
    if (step == max_len) break;
    logprob += row[best];
    prefix.push_back(best);
  }
  return {prefix.begin() + 1, prefix.end()};
}

TEST(Search, EosFirstGivesEmptyHypothesis) {
  NextTokenScorer s = [](const std::vector<std::vector<int>>& p) {
    std::vector<double> row(8, -1e9);
    row[4] = 0.0;
    return std::vector<std::vector<double>>(p.size(), row);
  };
  for (int beam : {1, 4}) {
    const auto h = search(s, {beam, 10, {}});
    EXPECT_TRUE(h.tokens.empty());
    EXPECT_FALSE(h.truncated);
  }
}

TEST(Search, GreedyMatchesReferenceLoop) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto s = table_scorer(seed, 9);
    double ref_lp = 0;
    const auto ref = greedy_reference(s, 12, ref_lp);
    const auto h = search(s, {1, 12, {}});
    EXPECT_EQ(h.tokens, ref) << seed;
    EXPECT_NEAR(h.logprob, ref_lp, 1e-12);
  }
}

TEST(Search, CapSetsTruncationFlag) {
  NextTokenScorer s = [](const std::vector<std::vector<int>>& p) {
    std::vector<double> row(8, -10.0);
    row[6] = -0.01;
    return std::vector<std::vector<double>>(p.size(), row);
  };
  const auto h = search(s, {1, 5, {}});
  EXPECT_TRUE(h.truncated);
  EXPECT_EQ(h.tokens, (std::vector<int>{6, 6, 6, 6, 6}));
}

TEST(Search, WiderBeamNotWorseThanGreedy) {
  int better = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto s = table_scorer(seed, 8);
    const auto g = search(s, {1, 10, {}});
    const auto b = search(s, {4, 10, {}});
    EXPECT_GE(b.normalized(), g.normalized() - 1e-12) << "seed " << seed;
    better += b.normalized() > g.normalized() + 1e-12;
  }
  EXPECT_GT(better, 0);
}

TEST(Search, ModelGreedyMatchesIndependentLoop) {
  auto m = micro_model(1, 7);
  torch::NoGradGuard ng;
  auto clip = media::VideoClip::blank(6);
  std::mt19937 gen(3);
  for (auto& p : clip.pixels) p = static_cast<std::uint8_t>(gen());
  const auto h = decode(m, clip, {1, 2.0});
  const auto z_e = m->encode(m->frontend(nn::clip_to_tensor(clip).unsqueeze(0)), lengths_of(6));
  std::vector<std::int64_t> prefix = {3};
  std::vector<int> tokens;
  for (int step = 0; step < 12; ++step) {
    const auto row = torch::log_softmax(m->decoder_logits(z_e, lengths_of(6), torch::tensor(prefix).unsqueeze(0)), -1)[0][-1].clone();
    for (int banned : {0, 1, 3}) row[banned] = -std::numeric_limits<float>::infinity();
    const int best = static_cast<int>(row.argmax().item<std::int64_t>());
    if (best == 4) break;
    tokens.push_back(best);
    prefix.push_back(best);
  }
  EXPECT_EQ(h.tokens, tokens);
  EXPECT_EQ(h.truncated, tokens.size() == 12u);
  if (!h.truncated) EXPECT_NEAR(h.logprob, sequence_logprob(m, z_e, h.tokens), 1e-4);
}

// ----- averaging

nn::Checkpoint random_ckpt(std::uint64_t seed) {
  torch::manual_seed(seed);
  nn::Checkpoint c;
  c.meta["seed"] = seed;
  c.put("a", torch::randn({3, 4}));
  c.put("b", torch::randn({5}, torch::kDouble));
  c.put("n", torch::tensor({static_cast<std::int64_t>(seed)}));
  return c;
}

TEST(Averaging, IdenticalCheckpointsAreBitEqual) {
  const auto c = random_ckpt(1);
  const auto avg = average_checkpoints({c, c, c, c, c, c, c});
  for (const auto& [name, t] : c.tensors) EXPECT_TRUE(torch::equal(*avg.find(name), t)) << name;
}

TEST(Averaging, OppositeWeightsCancel) {
  const auto c = random_ckpt(2);
  auto neg = c;
  neg.tensors.clear();
  for (const auto& [name, t] : c.tensors) neg.put(name, t.is_floating_point() ? -t : t);
  const auto avg = average_checkpoints({c, neg});
  EXPECT_EQ(avg.find("a")->abs().max().item<double>(), 0.0);
  EXPECT_EQ(avg.find("b")->abs().max().item<double>(), 0.0);
}

TEST(Averaging, LinearInScalarMultiplication) {
  std::vector<nn::Checkpoint> cs, scaled;
  for (std::uint64_t s = 0; s < 4; ++s) {
    cs.push_back(random_ckpt(s));
    auto k = cs.back();
    k.tensors.clear();
    for (const auto& [name, t] : cs.back().tensors) k.put(name, t.is_floating_point() ? t * 2 : t);
    scaled.push_back(k);
  }
  const auto a = average_checkpoints(cs), b = average_checkpoints(scaled);
  EXPECT_LT((*b.find("b") - 2 * *a.find("b")).abs().max().item<double>(), 1e-12);
  EXPECT_LT((*b.find("a") - 2 * *a.find("a")).abs().max().item<double>(), 1e-6);
}

TEST(Averaging, LastTenOfTwelveByMtime) {
  svsr::testing::TempDir tmp;
  const auto base = std::filesystem::file_time_type::clock::now() - std::chrono::hours(1);
  // names run against mtime order so that sorting by name would pick the wrong set
  for (int i = 0; i < 12; ++i) {
    const auto p = tmp / ("ckpt-" + std::to_string(100 - i) + ".ckpt");
    nn::save_checkpoint(random_ckpt(static_cast<std::uint64_t>(i)), p);
    std::filesystem::last_write_time(p, base + std::chrono::seconds(10 * i));
  }
  const auto picked = last_checkpoints(tmp.path(), 10);
  ASSERT_EQ(picked.size(), 10u);
  EXPECT_EQ(picked.front().filename(), "ckpt-98.ckpt");
  EXPECT_EQ(picked.back().filename(), "ckpt-89.ckpt");
  const auto avg = average_last(tmp.path(), 10);
  auto hand = torch::zeros({5}, torch::kDouble);
  for (int i = 2; i < 12; ++i) hand += *random_ckpt(static_cast<std::uint64_t>(i)).find("b");
  hand /= 10.0;
  EXPECT_LT((*avg.find("b") - hand).abs().max().item<double>(), 1e-12);
  EXPECT_EQ(avg.find("n")->item<std::int64_t>(), 11);
}

TEST(Averaging, MismatchedShapesRejected) {
  auto a = random_ckpt(1);
  nn::Checkpoint b;
  b.put("a", torch::zeros({2}));
  EXPECT_THROW(average_checkpoints({a, b}), Error);
}

// ----- schedule

TEST(Schedule, WarmupThenCosine) {
  const WarmupCosineSchedule s(1e-3, 50, 500);
  EXPECT_NEAR(s(0), 0.0, 1e-12);
  EXPECT_NEAR(s(25), 5e-4, 1e-12);
  EXPECT_DOUBLE_EQ(s(50), 1e-3);
  EXPECT_NEAR(s(275), 5e-4, 1e-12);
  EXPECT_NEAR(s(500), 0.0, 1e-12);
  for (int t = 51; t <= 500; ++t) EXPECT_LE(s(t), s(t - 1));
}

// ----- checkpoint round trip

TEST(ModelCheckpoint, ReloadGivesIdenticalOutputs) {
  svsr::testing::TempDir tmp;
  auto m = micro_model(1, 4);
  nn::save_checkpoint(model_checkpoint(m, 17), tmp / "m.ckpt");
  auto r = load_vsr_model(tmp / "m.ckpt");
  r->eval();
  torch::NoGradGuard ng;
  const auto x = torch::rand({1, 4, 96, 96});
  EXPECT_TRUE(torch::equal(m->frontend(x), r->frontend(x)));
  EXPECT_THROW(load_vsr_model(tmp / "missing.ckpt"), MissingArtifactError);
}

}  // namespace
}  // namespace svsr::vsr
