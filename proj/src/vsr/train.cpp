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

#include "svsr/vsr/train.hpp"

#include <cmath>
#include <deque>
#include <fstream>

#include <fmt/format.h>

#include "svsr/common/error.hpp"
#include "svsr/common/log.hpp"
#include "svsr/media/manifest.hpp"
#include "svsr/nn/tensors.hpp"
#include "svsr/trainer/frontend_init.hpp"
#include "svsr/vsr/averaging.hpp"
#include "svsr/vsr/schedule.hpp"

namespace svsr::vsr {

namespace fs = std::filesystem;

std::vector<VsrSample> load_vsr_samples(const media::Manifest& manifest, const tokenizer::Vocab& vocab) {
  std::vector<VsrSample> out;
  for (const auto& e : manifest.entries()) {
    if (!e.video_path || !e.transcript)
      throw DataError(fmt::format("entry '{}' lacks video_path or transcript", e.id));
    VsrSample s;
    s.id = e.id;
    s.clip = media::read_clip(manifest.resolve(*e.video_path));
    s.transcript = *e.transcript;
    s.tokens = vocab.encode(s.transcript);
    out.push_back(std::move(s));
  }
  return out;
}

nn::Checkpoint model_checkpoint(VsrModel& model, std::int64_t step) {
  nn::Checkpoint c;
  c.meta["kind"] = "vsr";
  c.meta["config"] = model->config().to_json();
  c.meta["step"] = step;
  nn::collect_module(c, "model.", *model);
  return c;
}

VsrModel load_vsr_model(const nn::Checkpoint& ckpt) {
  if (ckpt.meta.value("kind", "") != "vsr") throw FormatError("checkpoint does not hold a recognizer");
  VsrModel model(VsrConfig::from_json(ckpt.meta.at("config")));
  nn::restore_module(ckpt, "model.", *model);
  model->eval();
  return model;
}

VsrModel load_vsr_model(const fs::path& path) {
  if (!fs::exists(path))
    throw MissingArtifactError(fmt::format("recognizer {} not found; produce it with `svsr train-vsr`", path.string()));
  return load_vsr_model(nn::load_checkpoint(path));
}

VsrTrainResult train_vsr(const VsrConfig& config, const std::vector<const std::vector<VsrSample>*>& datasets,
                         const VsrTrainOptions& options, const fs::path& out_dir,
                         const nn::Checkpoint* frontend_init) {
  options.augment.validate();
  if (options.steps < 1) throw ConfigError("steps must be >= 1");
  std::vector<std::size_t> sizes;
  std::int64_t total_frames = 0;
  for (const auto* d : datasets) {
    sizes.push_back(d->size());
    for (const auto& s : *d) total_frames += s.clip.num_frames;
  }

  torch::manual_seed(options.seed);
  VsrModel model(config);
  if (frontend_init != nullptr) {
    const auto names = trainer::init_frontend(model, *frontend_init);
    log::info("initialised {} front-end tensors", names.size());
  }
  model->train();

  torch::optim::AdamW opt(model->parameters(),
                          torch::optim::AdamWOptions(options.peak_lr).weight_decay(options.weight_decay));
  WarmupCosineSchedule schedule(options.peak_lr, std::min(options.warmup_steps, options.steps), options.steps);

  trainer::MixedSampler sampler(sizes, options.mix, options.seed);
  trainer::FrameBudgetBatcher batcher(
      sampler, [&](const trainer::SampleRef& r) { return static_cast<std::int64_t>((*datasets[r.dataset])[r.index].clip.num_frames); },
      options.frame_budget, options.max_batch_items);

  const std::int64_t every =
      options.checkpoint_every > 0
          ? options.checkpoint_every
          : std::max<std::int64_t>(1, (total_frames + options.frame_budget - 1) / options.frame_budget);

  fs::create_directories(out_dir / "checkpoints");
  std::ofstream csv(out_dir / "train_log.csv");
  csv << "step,loss,ctc,ce,lr,frames,items\n";

  VsrTrainResult result;
  std::deque<fs::path> kept;
  auto save_epoch = [&](std::int64_t step) {
    const auto path = out_dir / "checkpoints" / fmt::format("step-{:07d}.ckpt", step);
    nn::save_checkpoint(model_checkpoint(model, step), path);
    kept.push_back(path);
    while (kept.size() > std::max<std::size_t>(options.keep_checkpoints, 1)) {
      fs::remove(kept.front());
      kept.pop_front();
    }
  };

  std::int64_t step = 0;
  for (; step < options.steps; ++step) {
    const double lr = schedule(step + 1);
    for (auto& g : opt.param_groups()) static_cast<torch::optim::AdamWOptions&>(g.options()).lr(lr);
    torch::manual_seed(options.seed * 1000003ULL + static_cast<std::uint64_t>(step));

    const auto batch = batcher.next();
    std::vector<media::VideoClip> clips;
    std::vector<std::vector<int>> targets;
    for (std::size_t i = 0; i < batch.items.size(); ++i) {
      const auto& s = (*datasets[batch.items[i].dataset])[batch.items[i].index];
      auto rng = make_rng({options.seed, static_cast<std::uint64_t>(step), i});
      clips.push_back(trainer::augment(s.clip, options.augment, rng));
      targets.push_back(s.tokens);
    }
    std::vector<const media::VideoClip*> ptrs;
    for (const auto& c : clips) ptrs.push_back(&c);
    auto [frames, lengths] = nn::pad_clips(ptrs);

    auto loss = model->loss(frames, lengths, targets);
    if (!std::isfinite(loss.total.item<double>())) throw NumericError(fmt::format("non-finite VSR loss at step {}", step));
    opt.zero_grad();
    loss.total.backward();
    if (options.grad_clip > 0.0) torch::nn::utils::clip_grad_norm_(model->parameters(), options.grad_clip);
    opt.step();

    VsrStepLog entry{step + 1, loss.total.item<double>(), loss.ctc.item<double>(), loss.ce.item<double>(), lr,
                     batch.frames, batch.items.size()};
    result.log.push_back(entry);
    csv << fmt::format("{},{:.6f},{:.6f},{:.6f},{:.8f},{},{}\n", entry.step, entry.loss, entry.ctc, entry.ce, entry.lr,
                       entry.frames, entry.items);
    if ((step + 1) % 50 == 0 || step == 0)
      log::info("vsr step {} loss {:.4f} (ctc {:.4f}, ce {:.4f}) lr {:.2e}", step + 1, entry.loss, entry.ctc,
                entry.ce, lr);
    if ((step + 1) % every == 0) save_epoch(step + 1);
    if (options.probe && options.probe_every > 0 && (step + 1) % options.probe_every == 0) {
      const bool stop = options.probe(model, step + 1);
      model->train();
      if (stop) {
        ++step;
        break;
      }
    }
  }
  result.steps_run = step;
  if (kept.empty() || kept.back().filename() != fmt::format("step-{:07d}.ckpt", step)) save_epoch(step);
  csv.close();

  result.checkpoints.assign(kept.begin(), kept.end());
  result.model_path = out_dir / "model.ckpt";
  auto averaged = average_last(out_dir / "checkpoints", options.average_last);
  averaged.meta["step"] = step;
  averaged.meta["averaged"] = std::min(options.average_last, kept.size());
  averaged.meta["eval_crop"] = options.augment.random_crop ? options.augment.crop_size : 0;
  nn::save_checkpoint(averaged, result.model_path);
  return result;
}

}  // namespace svsr::vsr
