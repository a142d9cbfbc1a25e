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

#include "svsr/lipgen/train.hpp"

#include <fstream>

#include <fmt/format.h>

#include "svsr/common/error.hpp"
#include "svsr/common/log.hpp"
#include "svsr/common/rng.hpp"
#include "svsr/lipgen/losses.hpp"
#include "svsr/media/sampling.hpp"
#include "svsr/media/wav.hpp"
#include "svsr/nn/optim_state.hpp"
#include "svsr/nn/tensors.hpp"

namespace svsr::lipgen {

namespace fs = std::filesystem;

std::vector<LamSample> load_lam_samples(const media::Manifest& manifest, const tokenizer::Vocab* vocab) {
  std::vector<LamSample> out;
  for (const auto& e : manifest.entries()) {
    if (!e.video_path || !e.audio_path) throw DataError(fmt::format("entry '{}' lacks video_path or audio_path", e.id));
    LamSample s;
    s.id = e.id;
    s.video = media::read_clip(manifest.resolve(*e.video_path));
    s.chunks = media::chunk_speech(media::load_wav(manifest.resolve(*e.audio_path)), s.video.fps);
    if (s.chunks.count != s.video.num_frames)
      throw DataError(fmt::format("entry '{}': {} speech chunks for {} video frames", e.id, s.chunks.count,
                                  s.video.num_frames));
    if (vocab != nullptr && e.transcript) s.tokens = vocab->encode(*e.transcript);
    out.push_back(std::move(s));
  }
  if (out.empty()) throw DataError("lip animation training needs at least one clip");
  return out;
}

LamTrainer::LamTrainer(const LamModelConfig& model, const LamLossWeights& weights, const LamTrainOptions& options,
                       std::vector<LamSample> data, std::shared_ptr<bridge::PerceptualLoss> perceptual)
    : cfg_(model), weights_(weights), opts_(options), data_(std::move(data)), perceptual_(std::move(perceptual)) {
  if (weights_.uses_recognizer() && !perceptual_)
    throw ConfigError(fmt::format("loss weights visual={} logits={} need a frozen recognizer (vsr_model)",
                                  weights_.visual, weights_.logits));
  if (opts_.window < 1 || opts_.disc_frames < 1) throw ConfigError("window and disc_frames must be >= 1");
  if (data_.empty()) throw DataError("lip animation training needs at least one clip");
  if (weights_.logits > 0.0)
    for (const auto& s : data_)
      if (s.tokens.empty()) throw DataError(fmt::format("clip '{}' has no transcript for the logits loss", s.id));

  torch::manual_seed(opts_.seed);
  g_ = Generator(cfg_);
  d_img_ = FrameDiscriminator(cfg_);
  d_seq_ = SequenceDiscriminator(cfg_);
  opt_g_ = std::make_unique<torch::optim::Adam>(g_->parameters(), torch::optim::AdamOptions(opts_.lr_generator));
  opt_img_ = std::make_unique<torch::optim::Adam>(d_img_->parameters(), torch::optim::AdamOptions(opts_.lr_frame_disc));
  opt_seq_ = std::make_unique<torch::optim::Adam>(d_seq_->parameters(), torch::optim::AdamOptions(opts_.lr_seq_disc));
}

LamStepStats LamTrainer::step() {
  g_->train();
  d_img_->train();
  d_seq_->train();
  torch::manual_seed(opts_.seed * 1000003ULL + static_cast<std::uint64_t>(step_));
  auto rng = make_rng({opts_.seed, static_cast<std::uint64_t>(step_), 0x1a4ULL});

  const auto& sample = data_[uniform_index(rng, data_.size())];
  const auto total = static_cast<std::int64_t>(sample.video.num_frames);
  const auto win = perceptual_ ? total : std::min(opts_.window, total);
  const auto start = static_cast<std::int64_t>(uniform_index(rng, static_cast<std::uint64_t>(total - win + 1)));

  auto real = nn::clip_to_tensor(sample.video).slice(0, start, start + win).unsqueeze(0);  // [1, W, 96, 96]
  auto first = real.slice(1, 0, 1);                                                        // [1, 1, 96, 96]
  auto chunks = nn::chunks_to_tensor(sample.chunks).slice(0, start, start + win).unsqueeze(0);
  auto rot = nn::rotations_to_tensor(media::RotationSequence::identity(static_cast<std::size_t>(win))).unsqueeze(0);

  auto fake = g_->forward(first, chunks, rot);  // [1, W, 96, 96]

  const auto k = static_cast<std::size_t>(std::min(opts_.disc_frames, win));
  auto pick = [&](const std::vector<std::size_t>& idx) {
    std::vector<std::int64_t> v(idx.begin(), idx.end());
    return torch::tensor(v, torch::kInt64);
  };
  const auto real_idx = pick(media::sample_frames(static_cast<std::size_t>(win), k, rng));
  const auto fake_idx = pick(media::sample_frames(static_cast<std::size_t>(win), k, rng));
  auto real_frames = real[0].index_select(0, real_idx).unsqueeze(1);
  auto fake_frames = fake[0].index_select(0, fake_idx).unsqueeze(1);

  LamStepStats st;
  st.step = step_ + 1;
  st.frames = fake.size(1);
  st.frame_count_ok = fake.size(1) == win;

  auto d_img = frame_disc_objective(d_img_, real_frames, fake_frames.detach(), first);
  opt_img_->zero_grad();
  (-d_img).backward();
  opt_img_->step();
  st.d_img = d_img.item<double>();

  auto d_seq = seq_disc_objective(d_seq_, real, fake.detach());
  opt_seq_->zero_grad();
  (-d_seq).backward();
  opt_seq_->step();
  st.d_seq = d_seq.item<double>();

  auto adv = generator_adv_terms(d_img_, d_seq_, fake_frames, first, fake);
  auto rec = reconstruction_loss(real, fake);
  auto vsr_term = torch::zeros({}, rec.options());
  if (perceptual_) {
    auto terms = (*perceptual_)(real, fake, {sample.tokens});
    vsr_term = terms.total;
    st.visual = terms.visual.item<double>();
    st.logits = terms.logits.item<double>();
  }
  auto total_loss = lam_total_loss(weights_, adv.frame, adv.sequence, rec, vsr_term);
  opt_g_->zero_grad();
  total_loss.backward();
  opt_g_->step();

  st.g_img = adv.frame.item<double>();
  st.g_seq = adv.sequence.item<double>();
  st.rec = rec.item<double>();
  st.total = total_loss.item<double>();
  if (!std::isfinite(st.total)) throw NumericError(fmt::format("non-finite lip animation loss at step {}", st.step));
  ++step_;
  return st;
}

nn::Checkpoint LamTrainer::checkpoint() const {
  nn::Checkpoint c;
  c.meta["kind"] = "lam";
  c.meta["model"] = cfg_.to_json();
  c.meta["weights"] = weights_.to_json();
  c.meta["step"] = step_;
  nn::collect_module(c, "g.", *g_);
  nn::collect_module(c, "d_img.", *d_img_);
  nn::collect_module(c, "d_seq.", *d_seq_);
  nn::save_optimizer(c, "opt_g.", *opt_g_);
  nn::save_optimizer(c, "opt_img.", *opt_img_);
  nn::save_optimizer(c, "opt_seq.", *opt_seq_);
  return c;
}

void LamTrainer::resume(const nn::Checkpoint& ckpt) {
  if (ckpt.meta.value("kind", "") != "lam") throw FormatError("checkpoint does not hold a lip animation model");
  if (LamModelConfig::from_json(ckpt.meta.at("model")).to_json() != cfg_.to_json())
    throw ConfigError("checkpoint architecture differs from the configured lip animation model");
  nn::restore_module(ckpt, "g.", *g_);
  nn::restore_module(ckpt, "d_img.", *d_img_);
  nn::restore_module(ckpt, "d_seq.", *d_seq_);
  nn::load_optimizer(ckpt, "opt_g.", *opt_g_);
  nn::load_optimizer(ckpt, "opt_img.", *opt_img_);
  nn::load_optimizer(ckpt, "opt_seq.", *opt_seq_);
  step_ = ckpt.meta.at("step").get<std::int64_t>();
}

LamRunResult train_lam(const LamModelConfig& model, const LamLossWeights& weights, const LamTrainOptions& options,
                       std::vector<LamSample> data, const fs::path& out_dir,
                       std::shared_ptr<bridge::PerceptualLoss> perceptual,
                       const std::optional<fs::path>& resume_from) {
  const auto epoch = static_cast<std::int64_t>(data.size());
  LamTrainer trainer(model, weights, options, std::move(data), std::move(perceptual));
  if (resume_from) trainer.resume(nn::load_checkpoint(*resume_from));
  const auto every = options.checkpoint_every > 0 ? options.checkpoint_every : epoch;

  fs::create_directories(out_dir / "checkpoints");
  const auto csv_path = out_dir / "loss_curve.csv";
  const bool fresh = !resume_from || !fs::exists(csv_path);
  std::ofstream csv(csv_path, fresh ? std::ios::trunc : std::ios::app);
  if (fresh) csv << "step,d_img,d_seq,g_img,g_seq,rec,visual,logits,total,frames\n";

  LamRunResult result;
  auto save = [&] {
    const auto ckpt = trainer.checkpoint();
    const auto path = out_dir / "checkpoints" / fmt::format("step-{:07d}.ckpt", trainer.steps_done());
    nn::save_checkpoint(ckpt, path);
    nn::save_checkpoint(ckpt, out_dir / "lam.ckpt");
    result.checkpoints.push_back(path);
  };
  while (trainer.steps_done() < options.steps) {
    const auto st = trainer.step();
    result.log.push_back(st);
    csv << fmt::format("{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{}\n", st.step, st.d_img, st.d_seq,
                       st.g_img, st.g_seq, st.rec, st.visual, st.logits, st.total, st.frames);
    if (st.step % 50 == 0 || st.step == 1)
      log::info("lam step {} rec {:.4f} d_img {:.4f} d_seq {:.4f} total {:.4f}", st.step, st.rec, st.d_img, st.d_seq,
                st.total);
    if (st.step % every == 0) save();
  }
  if (result.checkpoints.empty() || trainer.steps_done() % every != 0) save();
  result.final_checkpoint = out_dir / "lam.ckpt";
  return result;
}

}  // namespace svsr::lipgen
