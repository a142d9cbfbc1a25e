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

#include "svsr/synth/synthgen.hpp"

#include <fstream>
#include <map>
#include <numeric>

#include <fmt/format.h>

#include "svsr/common/error.hpp"
#include "svsr/common/hash.hpp"
#include "svsr/common/log.hpp"
#include "svsr/lipgen/generate.hpp"
#include "svsr/media/chunk.hpp"
#include "svsr/media/clip.hpp"
#include "svsr/media/rotation.hpp"
#include "svsr/nn/checkpoint.hpp"

namespace svsr::synth {

namespace fs = std::filesystem;
using nlohmann::json;

void SynthJob::validate() const {
  if (faces_per_clip < 1) throw ConfigError(fmt::format("faces_per_clip={} must be >= 1", faces_per_clip));
  if (max_seconds < 0.0) throw ConfigError("max_seconds must be >= 0");
  if (max_fail_fraction < 0.0 || max_fail_fraction > 1.0) throw ConfigError("max_fail_fraction must lie in [0, 1]");
  if (!(fps > 0.0f)) throw ConfigError("fps must be positive");
}

std::size_t sample_face(std::size_t pool_size, Rng& rng) {
  if (pool_size == 0) throw DataError("face pool is empty");
  return static_cast<std::size_t>(uniform_index(rng, pool_size));
}

std::vector<std::size_t> assign_faces(std::uint64_t seed, std::size_t speech_index, int replicas,
                                      std::size_t pool_size) {
  if (pool_size == 0) throw DataError("face pool is empty");
  auto rng = make_rng({seed, speech_index, 0xfaceULL});
  std::vector<std::size_t> order(pool_size);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<std::size_t> out;
  for (int r = 0; r < replicas; ++r) {
    const auto i = static_cast<std::size_t>(r) % pool_size;
    if (r > 0 && i == 0) std::iota(order.begin(), order.end(), std::size_t{0});  // pool exhausted: start a new round
    const auto j = i + sample_face(pool_size - i, rng);
    std::swap(order[i], order[j]);
    out.push_back(order[i]);
  }
  return out;
}

media::Image load_face(const media::Manifest& faces, const media::ManifestEntry& entry) {
  if (!entry.image_path) throw DataError(fmt::format("face entry '{}' has no image_path", entry.id));
  const auto img = media::load_image(faces.resolve(*entry.image_path));
  const auto box = entry.bbox.value_or(media::BBox{0, 0, img.width, img.height});
  return media::crop_mouth(img, box);
}

media::VideoClip synthesize_clip(lipgen::Generator& g, const media::Waveform& speech, const media::Image& face,
                                 float fps) {
  const auto chunks = media::chunk_speech(speech, fps);
  return lipgen::generate(g, face, chunks, media::RotationSequence::identity(chunks.count), fps);
}

namespace {

std::map<std::string, json> read_progress(const fs::path& path) {
  std::map<std::string, json> out;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      auto j = json::parse(line);
      out[j.at("id").get<std::string>()] = j;
    } catch (const std::exception&) {
      // A torn last line from an interrupted run is ignored.
    }
  }
  return out;
}

}  // namespace

SynthReport build_synth_dataset(const SynthJob& job) {
  job.validate();
  auto speech = media::Manifest::load(job.speech_manifest);
  speech.validate(media::DatasetRole::speech);
  auto faces = media::Manifest::load(job.face_manifest);
  faces.validate(media::DatasetRole::faces);
  if (faces.empty()) throw DataError("face pool is empty");

  const auto ckpt = nn::load_checkpoint(job.generator);
  auto g = lipgen::load_generator(ckpt);
  const auto gen_hash = ckpt.content_hash();

  fs::create_directories(job.out_dir / "clips");
  const auto progress_path = job.out_dir / "progress.jsonl";
  auto progress = read_progress(progress_path);
  std::ofstream progress_out(progress_path, std::ios::app);
  std::ofstream errors_out(job.out_dir / "errors.jsonl", std::ios::trunc);

  std::map<std::string, media::Image> face_cache;
  auto face_image = [&](std::size_t idx) -> const media::Image& {
    const auto& e = faces.entries()[idx];
    auto it = face_cache.find(e.id);
    if (it == face_cache.end()) it = face_cache.emplace(e.id, load_face(faces, e)).first;
    return it->second;
  };

  SynthReport report;
  report.manifest.set_base_dir(job.out_dir);
  std::size_t attempted = 0;
  for (std::size_t i = 0; i < speech.size(); ++i) {
    const auto& src = speech.entries()[i];
    media::Waveform wave;
    try {
      wave = media::load_wav(speech.resolve(*src.audio_path));
    } catch (const Error& e) {
      for (int r = 0; r < job.faces_per_clip; ++r) {
        ++attempted;
        ++report.failed;
        errors_out << json{{"id", fmt::format("{}__r{}", src.id, r)}, {"speech_id", src.id}, {"error", e.what()}}.dump()
                   << "\n";
      }
      continue;
    }
    if (job.max_seconds > 0.0 && wave.duration_seconds() > job.max_seconds) {
      ++report.filtered;
      log::info("skip {}: {:.2f} s exceeds max_seconds={}", src.id, wave.duration_seconds(), job.max_seconds);
      continue;
    }
    const auto assigned = assign_faces(job.seed, i, job.faces_per_clip, faces.size());
    for (int r = 0; r < job.faces_per_clip; ++r) {
      ++attempted;
      const auto& face = faces.entries()[assigned[static_cast<std::size_t>(r)]];
      const auto id = fmt::format("{}__r{}", src.id, r);
      const auto rel = fs::path("clips") / (id + ".svsr");
      const auto abs = job.out_dir / rel;
      std::string content_hash;
      try {
        const auto prev = progress.find(id);
        if (prev != progress.end() && fs::exists(abs) && prev->second.value("generator", "") == gen_hash &&
            prev->second.value("face_id", "") == face.id && sha256_file(abs) == prev->second.value("sha256", "")) {
          content_hash = prev->second.at("sha256").get<std::string>();
          ++report.reused;
        } else {
          const auto clip = synthesize_clip(g, wave, face_image(assigned[static_cast<std::size_t>(r)]), job.fps);
          media::write_clip(clip, abs);
          content_hash = sha256_file(abs);
          progress_out << json{{"id", id}, {"sha256", content_hash}, {"face_id", face.id}, {"generator", gen_hash}}.dump()
                       << "\n";
          progress_out.flush();
          ++report.generated;
          log::info("synth {} ({} frames, face {})", id, clip.num_frames, face.id);
        }
      } catch (const std::exception& e) {
        ++report.failed;
        errors_out << json{{"id", id}, {"speech_id", src.id}, {"face_id", face.id}, {"error", e.what()}}.dump() << "\n";
        log::warn("synth {} failed: {}", id, e.what());
        continue;
      }
      media::ManifestEntry out;
      out.id = id;
      out.video_path = rel;
      out.transcript = src.transcript;
      out.split = src.split;
      out.meta["speech_id"] = src.id;
      out.meta["face_id"] = face.id;
      out.meta["replica"] = r;
      out.meta["generator"] = gen_hash;
      out.meta["sha256"] = content_hash;
      report.manifest.add(std::move(out));
    }
  }
  report.manifest_path = job.out_dir / "synth.jsonl";
  report.manifest.save(report.manifest_path);
  if (attempted > 0 && static_cast<double>(report.failed) > job.max_fail_fraction * static_cast<double>(attempted))
    throw DataError(fmt::format("{} of {} synthetic clips failed (limit {:.0f}%); see {}", report.failed, attempted,
                                100.0 * job.max_fail_fraction, (job.out_dir / "errors.jsonl").string()));
  return report;
}

}  // namespace svsr::synth
