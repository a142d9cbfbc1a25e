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

#include "svsr/eval/mismatch.hpp"

#include <fmt/format.h>

#include "svsr/common/error.hpp"
#include "svsr/common/log.hpp"
#include "svsr/lipgen/generate.hpp"
#include "svsr/media/chunk.hpp"
#include "svsr/media/rotation.hpp"
#include "svsr/media/wav.hpp"

namespace svsr::eval {

namespace fs = std::filesystem;

const MismatchCell* MismatchReport::find(const std::string& model, const std::string& test) const {
  for (const auto& c : cells)
    if (c.model == model && c.test == test) return &c;
  return nullptr;
}

nlohmann::ordered_json MismatchReport::to_json() const {
  nlohmann::ordered_json j;
  j["cells"] = nlohmann::ordered_json::array();
  for (const auto& c : cells)
    j["cells"].push_back({{"model", c.model},
                          {"test", c.test},
                          {"wer", c.wer},
                          {"errors", c.errors},
                          {"ref_words", c.ref_words},
                          {"utterances", c.utterances}});
  j["excluded"] = excluded;
  j["synthetic_manifest"] = synthetic_manifest.string();
  return j;
}

TestSynthesizer generator_synthesizer(lipgen::Generator& g, const media::Manifest& test) {
  return [&g, &test](const media::ManifestEntry& e, const media::VideoClip& real) {
    if (!e.audio_path) throw DataError(fmt::format("test entry '{}' has no audio_path", e.id));
    const auto chunks = media::chunk_speech(media::load_wav(test.resolve(*e.audio_path)), real.fps);
    return lipgen::generate(g, real.frame(0), chunks, media::RotationSequence::identity(chunks.count), real.fps);
  };
}

MismatchReport mismatch_assessment(Transcriber& model_real, Transcriber& model_mix, const media::Manifest& real_test,
                                   const TestSynthesizer& synthesize, const fs::path& out_dir) {
  const auto synth_dir = out_dir / "synth_test";
  fs::create_directories(synth_dir / "clips");
  media::Manifest real_kept(real_test.base_dir());
  media::Manifest synth(synth_dir);
  MismatchReport report;
  for (const auto& e : real_test.entries()) {
    if (!e.video_path || !e.transcript) throw DataError(fmt::format("test entry '{}' lacks video or transcript", e.id));
    try {
      const auto real = media::read_clip(real_test.resolve(*e.video_path));
      const auto clip = synthesize(e, real);
      const auto rel = fs::path("clips") / (e.id + ".svsr");
      media::write_clip(clip, synth_dir / rel);
      media::ManifestEntry s;
      s.id = e.id;
      s.video_path = rel;
      s.transcript = e.transcript;
      s.split = e.split;
      s.meta["source"] = e.id;
      synth.add(std::move(s));
      real_kept.add(e);
    } catch (const std::exception& ex) {
      log::warn("mismatch: excluding '{}' from both test sets: {}", e.id, ex.what());
      report.excluded.push_back(e.id);
    }
  }
  report.synthetic_manifest = synth_dir / "synth_test.jsonl";
  synth.save(report.synthetic_manifest);

  const std::pair<const char*, Transcriber*> models[] = {{"real-only", &model_real}, {"real+synth", &model_mix}};
  const std::pair<const char*, const media::Manifest*> tests[] = {{"real", &real_kept}, {"synthetic", &synth}};
  for (const auto& [mname, model] : models) {
    for (const auto& [tname, manifest] : tests) {
      const auto rep = evaluate(*model, *manifest);
      const auto t = rep.totals();
      report.cells.push_back({mname, tname, rep.wer(), t.errors(), t.ref_words,
                              static_cast<std::int64_t>(rep.rows.size())});
      rep.write_json(out_dir / fmt::format("wer_{}_{}.json", mname, tname));
    }
  }
  return report;
}

}  // namespace svsr::eval
