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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <memory>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "svsr/bridge/perceptual.hpp"
#include "svsr/cli/cli.hpp"
#include "svsr/common/log.hpp"
#include "svsr/eval/evaluate.hpp"
#include "svsr/eval/mismatch.hpp"
#include "svsr/eval/plots.hpp"
#include "svsr/lipgen/generate.hpp"
#include "svsr/lipgen/train.hpp"
#include "svsr/media/chunk.hpp"
#include "svsr/media/image.hpp"
#include "svsr/media/manifest.hpp"
#include "svsr/media/wav.hpp"
#include "svsr/synth/synthgen.hpp"
#include "svsr/tokenizer/bpe.hpp"
#include "svsr/trainer/recipe.hpp"
#include "svsr/vsr/train.hpp"

namespace svsr::cli {

namespace fs = std::filesystem;

namespace {

const KeySpec kSeed{"seed", "", "random seed (mandatory)", true};

media::Manifest load_manifest(const RunConfig& cfg, const std::string& key, const std::string& producer) {
  const auto p = cfg.path(key);
  require_artifact(p, key, producer);
  return media::Manifest::load(p);
}

tokenizer::Vocab load_vocab(const RunConfig& cfg) {
  const auto p = cfg.path("vocab");
  require_artifact(p, "vocab", "train-vocab");
  return tokenizer::Vocab::load(p);
}

vsr::VsrModel load_model(const RunConfig& cfg, const std::string& key) {
  const auto p = cfg.path(key);
  require_artifact(p, key, "train-vsr");
  return vsr::load_vsr_model(p);
}

std::unique_ptr<eval::VsrTranscriber> make_transcriber(const RunConfig& cfg, const std::string& key,
                                                       const tokenizer::Vocab& vocab) {
  const auto p = cfg.path(key);
  require_artifact(p, key, "train-vsr");
  const auto ckpt = nn::load_checkpoint(p);
  auto model = vsr::load_vsr_model(ckpt);
  auto policy = trainer::AugmentPolicy::none();
  const int crop = ckpt.meta.value("eval_crop", 0);
  if (crop > 0) {
    policy.random_crop = true;
    policy.crop_size = crop;
  }
  vsr::DecodeOptions d;
  d.beam = static_cast<int>(cfg.integer("beam"));
  d.max_length_factor = cfg.real("max_length_factor");
  return std::make_unique<eval::VsrTranscriber>(model, vocab, d, policy);
}

// ---------------------------------------------------------------- preprocess

std::vector<fs::path> frame_files(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    auto ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (e.is_regular_file() && (ext == ".png" || ext == ".jpg" || ext == ".jpeg")) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

media::VideoClip frames_to_clip(const std::vector<fs::path>& files, const std::optional<media::BBox>& bbox, float fps) {
  media::VideoClip clip;
  clip.fps = fps;
  for (const auto& f : files) {
    const auto img = media::load_image(f);
    const auto box = bbox.value_or(media::BBox{0, 0, img.width, img.height});
    const auto mouth = media::crop_mouth(img, box);
    clip.pixels.insert(clip.pixels.end(), mouth.pixels.begin(), mouth.pixels.end());
    ++clip.num_frames;
  }
  clip.validate();
  return clip;
}

void cmd_preprocess(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
  const auto in = load_manifest(cfg, "manifest", "svsr_toy (or an external raw corpus)");
  const auto fps = static_cast<float>(cfg.real("fps"));
  media::Manifest result(dir);
  fs::create_directories(dir / "clips");
  fs::create_directories(dir / "audio");
  fs::create_directories(dir / "faces");
  std::size_t clips = 0, waves = 0, faces = 0;
  for (const auto& e : in.entries()) {
    media::ManifestEntry o;
    o.id = e.id;
    o.transcript = e.transcript;
    o.split = e.split;
    o.meta = e.meta;
    std::optional<std::uint32_t> frames;
    if (e.video_path) {
      const auto src = in.resolve(*e.video_path);
      auto clip = fs::is_directory(src) ? frames_to_clip(frame_files(src), e.bbox, fps) : media::read_clip(src);
      clip.fps = fps;
      const auto rel = fs::path("clips") / (e.id + ".svsr");
      media::write_clip(clip, dir / rel);
      o.video_path = rel;
      frames = clip.num_frames;
      ++clips;
    }
    if (e.audio_path) {
      auto wave = media::load_wav(in.resolve(*e.audio_path));
      if (frames) {
        // Align the audio to exactly one chunk per video frame.
        const auto want = static_cast<std::size_t>(std::lround(*frames * wave.sample_rate / fps));
        const auto have_frames = media::frames_for_duration(wave.duration_seconds(), fps);
        if (have_frames + 1 < *frames || have_frames > *frames + 1)
          throw DataError(fmt::format("entry '{}': audio spans {} frames but video has {}", e.id, have_frames, *frames));
        wave.samples.resize(want, 0.0f);
      }
      const auto rel = fs::path("audio") / (e.id + ".wav");
      media::save_wav(dir / rel, wave);
      o.audio_path = rel;
      ++waves;
    }
    if (e.image_path) {
      const auto img = media::load_image(in.resolve(*e.image_path));
      const auto box = e.bbox.value_or(media::BBox{0, 0, img.width, img.height});
      const auto rel = fs::path("faces") / (e.id + ".png");
      media::save_png(dir / rel, media::crop_mouth(img, box));
      o.image_path = rel;
      ++faces;
    }
    result.add(std::move(o));
  }
  result.save(dir / "manifest.jsonl");
  out << fmt::format("preprocessed {} entries ({} clips, {} waveforms, {} faces) -> {}\n", result.size(), clips, waves,
                     faces, (dir / "manifest.jsonl").string());
}

// --------------------------------------------------------------- train-vocab

void cmd_train_vocab(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
  std::vector<std::string> corpus;
  for (const auto& p : cfg.list("manifests")) {
    require_artifact(p, "manifests", "preprocess");
    const auto manifest = media::Manifest::load(p);
    for (const auto& e : manifest.entries())
      if (e.transcript) corpus.push_back(*e.transcript);
  }
  if (corpus.empty()) throw DataError("no transcripts found in the given manifests");
  const auto vocab = tokenizer::Vocab::train(corpus, static_cast<std::size_t>(cfg.integer("vocab_size")));
  vocab.save(dir / "vocab.json");
  out << fmt::format("vocabulary of {} pieces from {} transcripts -> {}\n", vocab.size(), corpus.size(),
                     (dir / "vocab.json").string());
}

// ----------------------------------------------------------------- train-lam

void cmd_train_lam(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
  auto weights = lipgen::LamLossWeights::preset(cfg.str("preset"));
  const std::pair<const char*, double*> overrides[] = {{"lambda_img", &weights.img},
                                                       {"lambda_seq", &weights.seq},
                                                       {"lambda_rec", &weights.rec},
                                                       {"lambda_visual", &weights.visual},
                                                       {"lambda_logits", &weights.logits}};
  for (const auto& [key, target] : overrides)
    if (!cfg.str(key).empty()) *target = cfg.real(key);

  lipgen::LamModelConfig model;
  model.width = cfg.real("width");
  model.decoder_convs_per_level = static_cast<int>(cfg.integer("decoder_convs_per_level"));

  lipgen::LamTrainOptions opts;
  opts.steps = cfg.integer("steps");
  opts.window = cfg.integer("window");
  opts.disc_frames = cfg.integer("disc_frames");
  opts.lr_generator = cfg.real("lr_generator");
  opts.lr_frame_disc = cfg.real("lr_frame_disc");
  opts.lr_seq_disc = cfg.real("lr_seq_disc");
  opts.seed = cfg.unsigned_integer("seed");
  opts.checkpoint_every = cfg.integer("checkpoint_every");

  const auto manifest = load_manifest(cfg, "manifest", "preprocess");
  manifest.validate(media::DatasetRole::audio_visual);

  std::shared_ptr<bridge::PerceptualLoss> perceptual;
  std::optional<tokenizer::Vocab> vocab;
  if (weights.uses_recognizer()) {
    if (cfg.str("vsr_model").empty())
      throw ConfigError(fmt::format("loss weights visual={} logits={} need vsr_model (a recognizer from `svsr train-vsr`)",
                                    weights.visual, weights.logits));
    perceptual = std::make_shared<bridge::PerceptualLoss>(load_model(cfg, "vsr_model"),
                                                          bridge::PerceptualWeights{weights.visual, weights.logits});
    if (weights.logits > 0.0) vocab = load_vocab(cfg);
  }
  auto data = lipgen::load_lam_samples(manifest, vocab ? &*vocab : nullptr);
  std::optional<fs::path> resume;
  if (!cfg.str("resume").empty()) {
    require_artifact(cfg.path("resume"), "resume", "train-lam");
    resume = cfg.path("resume");
  }
  const auto result = lipgen::train_lam(model, weights, opts, std::move(data), dir, perceptual, resume);
  eval::emit_loss_plot(dir / "loss_curve.csv", "step", {"rec", "d_img", "d_seq", "g_img", "g_seq"}, dir / "loss_curve.svg");
  const double last_rec = result.log.empty() ? 0.0 : result.log.back().rec;
  out << fmt::format("lip animation model after {} steps (last rec {:.4f}) -> {}\n",
                     result.log.empty() ? 0 : result.log.back().step, last_rec, result.final_checkpoint.string());
}

// ----------------------------------------------------------------- gen-synth

void cmd_gen_synth(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
  synth::SynthJob job;
  job.generator = cfg.path("generator");
  require_artifact(job.generator, "generator", "train-lam");
  job.speech_manifest = cfg.path("speech");
  require_artifact(job.speech_manifest, "speech", "preprocess");
  job.face_manifest = cfg.path("faces");
  require_artifact(job.face_manifest, "faces", "preprocess");
  job.faces_per_clip = static_cast<int>(cfg.integer("faces_per_clip"));
  job.max_seconds = cfg.real("max_seconds");
  job.max_fail_fraction = cfg.real("max_fail_fraction");
  job.fps = static_cast<float>(cfg.real("fps"));
  job.seed = cfg.unsigned_integer("seed");
  job.out_dir = dir;
  const auto report = synth::build_synth_dataset(job);
  out << fmt::format("synthetic dataset: {} entries ({} generated, {} reused, {} failed, {} filtered) -> {}\n",
                     report.manifest.size(), report.generated, report.reused, report.failed, report.filtered,
                     report.manifest_path.string());
}

// ----------------------------------------------------------------- train-vsr

const std::vector<KeySpec>& train_vsr_keys();

fs::path train_vsr_stage(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
  const auto vocab = load_vocab(cfg);
  auto model_cfg = vsr::VsrConfig::preset(cfg.str("preset"));
  model_cfg.vocab_size = static_cast<int>(vocab.size());
  model_cfg.dropout = cfg.real("dropout");
  model_cfg.ctc_weight = cfg.real("ctc_weight");
  model_cfg.validate();

  std::vector<std::vector<vsr::VsrSample>> sets;
  for (const auto& p : cfg.list("train")) {
    require_artifact(p, "train", "preprocess or gen-synth");
    sets.push_back(vsr::load_vsr_samples(media::Manifest::load(p), vocab));
  }
  if (sets.empty()) throw ConfigError("train-vsr: key 'train' lists no manifests");
  std::vector<const std::vector<vsr::VsrSample>*> ptrs;
  for (const auto& s : sets) ptrs.push_back(&s);

  vsr::VsrTrainOptions opts;
  opts.steps = cfg.integer("steps");
  opts.peak_lr = cfg.real("peak_lr");
  opts.warmup_steps = cfg.integer("warmup_steps");
  opts.weight_decay = cfg.real("weight_decay");
  opts.grad_clip = cfg.real("grad_clip");
  opts.frame_budget = cfg.integer("frame_budget");
  opts.max_batch_items = static_cast<std::size_t>(cfg.integer("max_batch_items"));
  opts.seed = cfg.unsigned_integer("seed");
  opts.checkpoint_every = cfg.integer("checkpoint_every");
  opts.average_last = static_cast<std::size_t>(cfg.integer("average_last"));
  opts.keep_checkpoints = std::max<std::size_t>(opts.average_last, 1);
  opts.augment.hflip_prob = cfg.real("hflip_prob");
  opts.augment.crop_size = static_cast<int>(cfg.integer("crop_size"));
  opts.augment.random_crop = opts.augment.crop_size > 0 && opts.augment.crop_size < media::kFrameSize;
  if (!opts.augment.random_crop) opts.augment.crop_size = media::kFrameSize;
  opts.augment.max_masks = static_cast<int>(cfg.integer("max_masks"));
  opts.augment.max_mask_fraction = cfg.real("max_mask_fraction");
  for (const auto& w : cfg.list("weights")) {
    try {
      opts.mix.weights.push_back(std::stod(w));
    } catch (const std::exception&) {
      throw ConfigError(fmt::format("train-vsr: weight '{}' is not a number", w));
    }
  }

  std::optional<nn::Checkpoint> init;
  if (!cfg.str("frontend_init").empty()) {
    require_artifact(cfg.path("frontend_init"), "frontend_init", "train-vsr");
    init = nn::load_checkpoint(cfg.path("frontend_init"));
  }
  const auto result = vsr::train_vsr(model_cfg, ptrs, opts, dir, init ? &*init : nullptr);
  eval::emit_loss_plot(dir / "train_log.csv", "step", {"loss", "ctc", "ce"}, dir / "train_log.svg");
  out << fmt::format("recognizer after {} steps (final loss {:.4f}) -> {}\n", result.steps_run,
                     result.log.empty() ? 0.0 : result.log.back().loss, result.model_path.string());
  return result.model_path;
}

void cmd_train_vsr(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
  if (cfg.str("recipe").empty()) {
    train_vsr_stage(cfg, dir, out);
    return;
  }
  require_artifact(cfg.path("recipe"), "recipe", "a hand-written recipe file");
  const auto recipe = trainer::Recipe::load(cfg.path("recipe"));
  std::map<std::string, fs::path> produced;
  fs::path last;
  for (const auto& stage : recipe.stages) {
    auto values = cfg.values();
    values.erase("recipe");
    for (auto [k, v] : recipe.stage_config(stage)) {
      if (auto ref = trainer::stage_reference(v)) v = produced.at(*ref).string();
      values[k] = v;
    }
    std::vector<KeySpec> specs;
    for (const auto& k : train_vsr_keys())
      if (k.key != "recipe") specs.push_back(k);
    const auto stage_cfg = resolve_config("train-vsr", specs, {}, values);
    out << fmt::format("stage '{}'\n", stage);
    last = train_vsr_stage(stage_cfg, dir / stage, out);
    produced[stage] = last;
  }
  fs::copy_file(last, dir / "model.ckpt", fs::copy_options::overwrite_existing);
  out << fmt::format("recipe finished -> {}\n", (dir / "model.ckpt").string());
}

// -------------------------------------------------------------- decode, eval

void cmd_decode(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
  const auto vocab = load_vocab(cfg);
  auto t = make_transcriber(cfg, "model", vocab);
  const auto manifest = load_manifest(cfg, "manifest", "preprocess");
  const auto records = eval::decode_manifest(*t, manifest);
  eval::write_decode_jsonl(records, dir / "decode.jsonl");
  std::size_t truncated = 0;
  for (const auto& r : records) truncated += r.truncated ? 1 : 0;
  out << fmt::format("decoded {} utterances ({} truncated) -> {}\n", records.size(), truncated,
                     (dir / "decode.jsonl").string());
}

void cmd_eval(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
  const auto manifest = load_manifest(cfg, "manifest", "preprocess");
  std::vector<eval::DecodeRecord> records;
  if (!cfg.str("hypotheses").empty()) {
    require_artifact(cfg.path("hypotheses"), "hypotheses", "decode");
    records = eval::read_decode_jsonl(cfg.path("hypotheses"));
  } else {
    const auto vocab = load_vocab(cfg);
    auto t = make_transcriber(cfg, "model", vocab);
    records = eval::decode_manifest(*t, manifest);
    eval::write_decode_jsonl(records, dir / "decode.jsonl");
  }
  const auto report = eval::score_records(manifest, records);
  report.write_json(dir / "wer.json");
  report.write_csv(dir / "wer.csv");
  const auto t = report.totals();
  out << fmt::format("WER {:.4f} ({} errors / {} words: S={} I={} D={}) over {} utterances\n", report.wer(),
                     t.errors(), t.ref_words, t.substitutions, t.insertions, t.deletions, report.rows.size());
}

// ------------------------------------------------------------------ mismatch

void cmd_mismatch(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
  const auto vocab = load_vocab(cfg);
  auto real_model = make_transcriber(cfg, "model_real", vocab);
  auto mix_model = make_transcriber(cfg, "model_mix", vocab);
  const auto test = load_manifest(cfg, "test", "preprocess");
  require_artifact(cfg.path("generator"), "generator", "train-lam");
  auto g = lipgen::load_generator(cfg.path("generator"));
  const auto report = eval::mismatch_assessment(*real_model, *mix_model, test, eval::generator_synthesizer(g, test), dir);
  std::ofstream(dir / "mismatch.json") << report.to_json().dump(2) << "\n";
  eval::emit_plots(report, dir);
  out << "model        test       WER\n";
  for (const auto& c : report.cells) out << fmt::format("{:<12} {:<10} {:.4f}\n", c.model, c.test, c.wer);
  if (!report.excluded.empty()) out << fmt::format("{} utterances excluded from both test sets\n", report.excluded.size());
}

// -------------------------------------------------------------------- report

void cmd_report(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
  nlohmann::ordered_json summary;
  summary["plots"] = nlohmann::ordered_json::array();
  if (!cfg.str("mismatch").empty()) {
    require_artifact(cfg.path("mismatch"), "mismatch", "mismatch");
    const auto cells = eval::read_mismatch_csv(cfg.path("mismatch"));
    eval::write_mismatch_csv(cells, dir / "mismatch.csv");
    if (!cells.empty()) {
      std::ofstream(dir / "mismatch.svg") << eval::mismatch_svg(cells);
      summary["plots"].push_back("mismatch.svg");
    }
    summary["mismatch"] = nlohmann::ordered_json::array();
    for (const auto& c : cells) summary["mismatch"].push_back({{"model", c.model}, {"test", c.test}, {"wer", c.wer}});
  }
  int index = 0;
  for (const auto& csv : cfg.list("curves")) {
    require_artifact(csv, "curves", "train-lam or train-vsr");
    const auto table = eval::CsvTable::read(csv);
    std::vector<std::string> columns = cfg.list("columns");
    if (columns.empty())
      for (const auto& h : table.header)
        if (h != cfg.str("x_column")) columns.push_back(h);
    const auto name = fmt::format("curve_{}_{}.svg", index++, fs::path(csv).stem().string());
    eval::emit_loss_plot(csv, cfg.str("x_column"), columns, dir / name);
    summary["plots"].push_back(name);
  }
  std::ofstream(dir / "report.json") << summary.dump(2) << "\n";
  out << fmt::format("report with {} plots -> {}\n", summary["plots"].size(), dir.string());
}

const std::vector<KeySpec>& train_vsr_keys() {
  static const std::vector<KeySpec> keys = {
      kSeed,
      {"train", "", "comma-separated training manifests (real, synthetic)"},
      {"weights", "", "comma-separated sampling weights; empty = proportional to size"},
      {"vocab", "", "vocabulary from train-vocab"},
      {"preset", "desk", "desk | desk-small | base | large"},
      {"dropout", "0.1", "dropout probability"},
      {"ctc_weight", "0.1", "alpha of the joint CTC/CE loss"},
      {"steps", "500", "optimizer steps"},
      {"peak_lr", "1e-3", "peak learning rate"},
      {"warmup_steps", "50", "linear warm-up steps before cosine decay"},
      {"weight_decay", "0.03", "AdamW weight decay"},
      {"grad_clip", "5.0", "gradient norm clip (0 disables)"},
      {"frame_budget", "2400", "maximum frames per batch"},
      {"max_batch_items", "0", "maximum utterances per batch (0 = no limit)"},
      {"checkpoint_every", "0", "steps per checkpoint (0 = one epoch)"},
      {"average_last", "10", "checkpoints averaged into the final model"},
      {"hflip_prob", "0.5", "horizontal flip probability"},
      {"crop_size", "88", "random crop size (96 or 0 disables)"},
      {"max_masks", "1", "time masks per utterance"},
      {"max_mask_fraction", "0.4", "maximum mask length as a fraction of T"},
      {"frontend_init", "", "checkpoint whose front-end initialises the model"},
      {"recipe", "", "multi-stage recipe file; stage keys override these"},
  };
  return keys;
}

std::vector<CommandSpec> build_commands() {
  const KeySpec beam{"beam", "1", "beam width (1 = greedy)"};
  const KeySpec max_len{"max_length_factor", "2.0", "output length cap as a multiple of T"};
  return {
      {"preprocess",
       "crop mouths to 96x96 gray clips and align audio",
       {kSeed, {"manifest", "", "raw manifest (frame directories or clips, bbox, audio, images)"},
        {"fps", "25", "video frame rate"}},
       cmd_preprocess},
      {"train-vocab",
       "train the subword vocabulary",
       {kSeed, {"manifests", "", "comma-separated manifests with transcripts"},
        {"vocab_size", "256", "vocabulary size including specials"}},
       cmd_train_vocab},
      {"train-lam",
       "train the lip animation model",
       {kSeed,
        {"manifest", "", "audio-visual manifest from preprocess"},
        {"preset", "baseline", "loss weights: baseline | lrs3-vsr-vl | lrs3-vsr-v | lrs3-vsr-l | avox"},
        {"lambda_img", "", "override frame adversarial weight"},
        {"lambda_seq", "", "override sequence adversarial weight"},
        {"lambda_rec", "", "override reconstruction weight"},
        {"lambda_visual", "", "override perceptual feature weight"},
        {"lambda_logits", "", "override perceptual logits weight"},
        {"vsr_model", "", "frozen recognizer for the perceptual loss"},
        {"vocab", "", "vocabulary (needed for the logits term)"},
        {"width", "0.25", "channel width multiplier"},
        {"decoder_convs_per_level", "2", "styled convolutions per decoder level"},
        {"steps", "1000", "training steps"},
        {"window", "75", "frames per training window"},
        {"disc_frames", "4", "frames sampled for the frame discriminator"},
        {"lr_generator", "1e-4", "generator learning rate"},
        {"lr_frame_disc", "1e-4", "frame discriminator learning rate"},
        {"lr_seq_disc", "1e-5", "sequence discriminator learning rate"},
        {"checkpoint_every", "0", "steps per checkpoint (0 = one epoch)"},
        {"resume", "", "checkpoint to resume from"}},
       cmd_train_lam},
      {"gen-synth",
       "generate the synthetic dataset from speech and faces",
       {kSeed,
        {"generator", "", "lip animation checkpoint"},
        {"speech", "", "speech manifest (audio + transcript)"},
        {"faces", "", "face manifest (images)"},
        {"faces_per_clip", "1", "faces paired with every speech clip"},
        {"max_seconds", "0", "drop speech longer than this (0 keeps all; 6 or 20 mirror the paper presets)"},
        {"max_fail_fraction", "0.1", "fail the job above this fraction of failed clips"},
        {"fps", "25", "video frame rate"}},
       cmd_gen_synth},
      {"train-vsr", "train the recognizer on real and synthetic data", train_vsr_keys(), cmd_train_vsr},
      {"decode",
       "decode a manifest to decode.jsonl",
       {kSeed, {"model", "", "recognizer checkpoint"}, {"vocab", "", "vocabulary"}, {"manifest", "", "clips to decode"},
        beam, max_len},
       cmd_decode},
      {"eval",
       "score a manifest (decoding inline or from hypotheses)",
       {kSeed, {"manifest", "", "test manifest"}, {"hypotheses", "", "decode.jsonl from `svsr decode`"},
        {"model", "", "recognizer checkpoint"}, {"vocab", "", "vocabulary"}, beam, max_len},
       cmd_eval},
      {"mismatch",
       "2x2 real/synthetic domain mismatch assessment",
       {kSeed, {"model_real", "", "recognizer trained on real data"},
        {"model_mix", "", "recognizer trained on real + synthetic data"}, {"vocab", "", "vocabulary"},
        {"test", "", "real test manifest with video, audio and transcripts"},
        {"generator", "", "lip animation checkpoint"}, beam, max_len},
       cmd_mismatch},
      {"report",
       "plots from mismatch and training CSVs",
       {kSeed, {"mismatch", "", "mismatch.csv"}, {"curves", "", "comma-separated training CSVs"},
        {"x_column", "step", "x axis column"}, {"columns", "", "columns to plot (default all)"}},
       cmd_report},
  };
}

}  // namespace

const std::vector<CommandSpec>& commands() {
  static const std::vector<CommandSpec> cmds = build_commands();
  return cmds;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config: return 2;
    case ErrorKind::format: return 3;
    case ErrorKind::shape: return 4;
    case ErrorKind::data: return 5;
    case ErrorKind::numeric: return 6;
    case ErrorKind::missing_artifact: return 7;
    case ErrorKind::io: return 8;
  }
  return 1;
}

namespace {

std::map<std::string, std::string> read_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read config file {}", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return trainer::parse_key_values(ss.str(), path.string());
}

struct SubcommandState {
  const CommandSpec* spec = nullptr;
  CLI::App* app = nullptr;
  std::map<std::string, std::string> values;
  std::string config_file;
  std::string out_dir;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Visual speech recognition with synthetic lip training data", "svsr"};
  app.require_subcommand(1);
  std::vector<std::unique_ptr<SubcommandState>> states;
  for (const auto& spec : commands()) {
    auto st = std::make_unique<SubcommandState>();
    st->spec = &spec;
    st->app = app.add_subcommand(spec.name, spec.summary);
    st->app->add_option("--config", st->config_file, "key = value file; command-line keys take precedence");
    st->app->add_option("--out", st->out_dir, "run directory (default: $SVSR_RUN_ROOT/<command>-<config hash>)");
    for (const auto& k : spec.keys) {
      auto help = k.help;
      if (k.required) help += " [required]";
      else if (!k.default_value.empty()) help += fmt::format(" [{}]", k.default_value);
      st->app->add_option("--" + k.key, st->values[k.key], help);
    }
    states.push_back(std::move(st));
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return exit_code(ErrorKind::config);
  }

  for (auto& st : states) {
    if (!st->app->parsed()) continue;
    try {
      std::map<std::string, std::string> cli_values;
      for (const auto& k : st->spec->keys)
        if (st->app->count("--" + k.key) > 0) cli_values[k.key] = st->values[k.key];
      const auto file_values =
          st->config_file.empty() ? std::map<std::string, std::string>{} : read_config_file(st->config_file);
      const auto cfg = resolve_config(st->spec->name, st->spec->keys, file_values, cli_values);
      const fs::path dir = st->out_dir.empty() ? run_directory(cfg) : fs::path(st->out_dir);
      fs::create_directories(dir);
      std::ofstream(dir / "config.json") << cfg.to_json().dump(2) << "\n";
      log::set_file_sink(dir / "log.txt");
      log::info("{} -> {}", st->spec->name, dir.string());
      try {
        st->spec->run(cfg, dir, out);
      } catch (...) {
        log::set_file_sink({});
        throw;
      }
      log::set_file_sink({});
      out << fmt::format("run directory: {}\n", dir.string());
      return 0;
    } catch (const Error& e) {
      err << fmt::format("svsr {}: {} error: {}\n", st->spec->name, to_string(e.kind()), e.what());
      return exit_code(e.kind());
    } catch (const fs::filesystem_error& e) {
      err << fmt::format("svsr {}: io error: {}\n", st->spec->name, e.what());
      return exit_code(ErrorKind::io);
    } catch (const std::exception& e) {
      err << fmt::format("svsr {}: unexpected error: {}\n", st->spec->name, e.what());
      return 1;
    }
  }
  return 1;
}

}  // namespace svsr::cli
