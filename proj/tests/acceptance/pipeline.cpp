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

// Criteria 9 and 10: the toy pipeline through the command-line entry point.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "criteria.hpp"
#include "svsr/cli/cli.hpp"
#include "svsr/media/manifest.hpp"
#include "svsr/toy/corpus.hpp"

namespace svsr::acceptance {

namespace fs = std::filesystem;

namespace {

struct PipelineRun {
  fs::path pre_train, pre_test, vocab, lam, synth, vsr_real, vsr_mix, mismatch, decode;
  std::size_t speech_entries = 0, synth_entries = 0;
  double seconds = 0.0;
};

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Runs one subcommand in-process and returns its run directory.
fs::path step(std::vector<std::string> args) {
  std::ostringstream out, err;
  const auto name = args.front();
  args.insert(args.begin() + 1, {"--seed", "11"});
  const int rc = cli::run_cli(args, out, err);
  if (rc != 0) throw std::runtime_error(fmt::format("{} exited {}: {}", name, rc, err.str()));
  const std::string marker = "run directory: ";
  const auto text = out.str();
  const auto at = text.find(marker);
  if (at == std::string::npos) throw std::runtime_error(name + " did not report its run directory");
  const auto end = text.find('\n', at);
  return fs::path(text.substr(at + marker.size(), end - at - marker.size()));
}

const fs::path& corpus_dir(const fs::path& work) {
  static const fs::path dir = [&] {
    const auto d = work.parent_path() / "toy_corpus";
    toy::CorpusOptions o;
    o.seed = 3;
    toy::write_corpus(d, o);
    return d;
  }();
  return dir;
}

PipelineRun run_pipeline(const fs::path& corpus, const fs::path& run_root) {
  fs::create_directories(run_root);
  setenv("SVSR_RUN_ROOT", run_root.c_str(), 1);
  const auto t0 = std::chrono::steady_clock::now();
  PipelineRun r;
  r.pre_train = step({"preprocess", "--manifest", (corpus / "raw_train.jsonl").string()});
  r.pre_test = step({"preprocess", "--manifest", (corpus / "raw_test.jsonl").string()});
  const auto train = (r.pre_train / "manifest.jsonl").string();
  const auto test = (r.pre_test / "manifest.jsonl").string();
  r.vocab = step({"train-vocab", "--manifests", train + "," + (corpus / "speech.jsonl").string(), "--vocab_size", "64"});
  const auto vocab = (r.vocab / "vocab.json").string();
  r.lam = step({"train-lam", "--manifest", train, "--steps", "40", "--checkpoint_every", "20"});
  const auto generator = (r.lam / "lam.ckpt").string();
  r.synth = step({"gen-synth", "--generator", generator, "--speech", (corpus / "speech.jsonl").string(), "--faces",
                  (corpus / "faces.jsonl").string(), "--faces_per_clip", "2"});
  r.speech_entries = media::Manifest::load(corpus / "speech.jsonl").size();
  r.synth_entries = media::Manifest::load(r.synth / "synth.jsonl").size();
  const std::vector<std::string> vsr_common = {"--vocab", vocab, "--steps", "150", "--warmup_steps", "30",
                                               "--frame_budget", "300", "--checkpoint_every", "50"};
  auto vsr_args = [&](const std::string& train_list) {
    std::vector<std::string> a = {"train-vsr", "--train", train_list};
    a.insert(a.end(), vsr_common.begin(), vsr_common.end());
    return a;
  };
  r.vsr_real = step(vsr_args(train));
  r.vsr_mix = step(vsr_args(train + "," + (r.synth / "synth.jsonl").string()));
  r.mismatch = step({"mismatch", "--model_real", (r.vsr_real / "model.ckpt").string(), "--model_mix",
                     (r.vsr_mix / "model.ckpt").string(), "--vocab", vocab, "--test", test, "--generator", generator});
  r.decode = step({"decode", "--model", (r.vsr_mix / "model.ckpt").string(), "--vocab", vocab, "--manifest", test});
  unsetenv("SVSR_RUN_ROOT");
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::optional<PipelineRun> first_run;

const PipelineRun& first_pipeline(const fs::path& work) {
  if (!first_run) first_run = run_pipeline(corpus_dir(work), work / "runs");
  return *first_run;
}

}  // namespace

Verdict pipeline_mismatch(const fs::path& work) {
  Checks checks;
  const auto& r = first_pipeline(work);
  checks.expect(r.synth_entries == 2 * r.speech_entries,
                fmt::format("gen-synth gave {} entries for {} speech clips", r.synth_entries, r.speech_entries));
  const auto report = nlohmann::json::parse(read_text(r.mismatch / "mismatch.json"));
  const auto& cells = report.at("cells");
  checks.expect(cells.size() == 4, fmt::format("{} mismatch cells", cells.size()));
  const std::vector<std::pair<std::string, std::string>> grid = {
      {"real-only", "real"}, {"real-only", "synthetic"}, {"real+synth", "real"}, {"real+synth", "synthetic"}};
  std::string wers;
  for (std::size_t i = 0; i < grid.size() && i < cells.size(); ++i) {
    checks.expect(cells[i].at("model") == grid[i].first && cells[i].at("test") == grid[i].second,
                  fmt::format("cell {} is {}/{}", i, cells[i].at("model").dump(), cells[i].at("test").dump()));
    checks.expect(cells[i].at("utterances").get<int>() > 0, fmt::format("cell {} is empty", i));
    wers += fmt::format("{}{:.2f}", wers.empty() ? "" : " ", cells[i].at("wer").get<double>());
  }
  checks.expect(fs::exists(r.mismatch / "mismatch.csv") && fs::exists(r.mismatch / "mismatch.svg"),
                "mismatch plot files missing");
  checks.expect(r.seconds <= 1800.0, fmt::format("pipeline took {:.0f}s", r.seconds));
  return checks.verdict(fmt::format("|D_synth|={}=2x{}, 2x2 WER grid [{}], {:.0f}s", r.synth_entries,
                                    r.speech_entries, wers, r.seconds));
}

Verdict pipeline_determinism(const fs::path& work) {
  Checks checks;
  const auto& a = first_pipeline(work.parent_path() / "c09");
  const auto b = run_pipeline(corpus_dir(work), work / "runs");
  const std::vector<std::pair<std::string, std::pair<fs::path, fs::path>>> files = {
      {"preprocessed train manifest", {a.pre_train / "manifest.jsonl", b.pre_train / "manifest.jsonl"}},
      {"preprocessed test manifest", {a.pre_test / "manifest.jsonl", b.pre_test / "manifest.jsonl"}},
      {"vocabulary", {a.vocab / "vocab.json", b.vocab / "vocab.json"}},
      {"synthetic manifest", {a.synth / "synth.jsonl", b.synth / "synth.jsonl"}},
      {"decode hypotheses", {a.decode / "decode.jsonl", b.decode / "decode.jsonl"}},
      {"synthetic test manifest", {a.mismatch / "synth_test" / "synth_test.jsonl", b.mismatch / "synth_test" / "synth_test.jsonl"}},
  };
  for (const auto& [what, paths] : files) {
    checks.expect(fs::exists(paths.first), what + " missing");
    checks.expect(read_text(paths.first) == read_text(paths.second), what + " differs");
  }
  const auto ra = nlohmann::json::parse(read_text(a.mismatch / "mismatch.json")).at("cells");
  const auto rb = nlohmann::json::parse(read_text(b.mismatch / "mismatch.json")).at("cells");
  checks.expect(ra == rb, "mismatch grid differs");
  checks.expect(a.pre_train.parent_path() != b.pre_train.parent_path(), "reruns shared a run root");
  return checks.verdict(fmt::format("{} artifacts and the 2x2 grid identical across run roots", files.size()));
}

}  // namespace svsr::acceptance
