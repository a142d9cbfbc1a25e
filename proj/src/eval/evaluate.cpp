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

#include "svsr/eval/evaluate.hpp"

#include <fstream>

#include <fmt/format.h>

#include "svsr/common/error.hpp"

namespace svsr::eval {

VsrTranscriber::VsrTranscriber(vsr::VsrModel model, tokenizer::Vocab vocab, vsr::DecodeOptions decode,
                               trainer::AugmentPolicy policy)
    : model_(std::move(model)), vocab_(std::move(vocab)), decode_(decode), policy_(policy) {
  if (model_->config().vocab_size != static_cast<int>(vocab_.size()))
    throw ConfigError(fmt::format("recognizer vocabulary ({}) differs from the tokenizer ({})",
                                  model_->config().vocab_size, vocab_.size()));
}

DecodeRecord VsrTranscriber::transcribe(const media::ManifestEntry& entry, const media::VideoClip& clip) {
  const auto h = vsr::decode(model_, trainer::eval_transform(clip, policy_), decode_);
  return {entry.id, vocab_.decode(h.tokens), h.logprob, h.truncated};
}

HypothesisTranscriber::HypothesisTranscriber(std::vector<DecodeRecord> records) {
  for (auto& r : records) records_[r.id] = std::move(r);
}

DecodeRecord HypothesisTranscriber::transcribe(const media::ManifestEntry& entry, const media::VideoClip&) {
  const auto it = records_.find(entry.id);
  if (it == records_.end()) throw DataError(fmt::format("no hypothesis for utterance '{}'", entry.id));
  return it->second;
}

std::vector<DecodeRecord> decode_manifest(Transcriber& t, const media::Manifest& test) {
  std::vector<DecodeRecord> out;
  for (const auto& e : test.entries()) {
    if (!e.video_path) throw DataError(fmt::format("test entry '{}' has no video_path", e.id));
    out.push_back(t.transcribe(e, media::read_clip(test.resolve(*e.video_path))));
  }
  return out;
}

void write_decode_jsonl(const std::vector<DecodeRecord>& records, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
  for (const auto& r : records)
    out << nlohmann::ordered_json{{"id", r.id}, {"hypothesis", r.hypothesis}, {"logprob", r.logprob},
                                  {"truncated", r.truncated}}
               .dump()
        << "\n";
}

std::vector<DecodeRecord> read_decode_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw MissingArtifactError(fmt::format("decode results {} not found; produce them with `svsr decode`", path.string()));
  std::vector<DecodeRecord> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      out.push_back({j.at("id").get<std::string>(), j.at("hypothesis").get<std::string>(), j.value("logprob", 0.0),
                     j.value("truncated", false)});
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(fmt::format("{}:{}: {}", path.string(), lineno, e.what()));
    }
  }
  return out;
}

WerReport score_records(const media::Manifest& test, const std::vector<DecodeRecord>& records) {
  std::map<std::string, const DecodeRecord*> by_id;
  for (const auto& r : records) by_id[r.id] = &r;
  WerReport rep;
  for (const auto& e : test.entries()) {
    if (!e.transcript) throw DataError(fmt::format("test entry '{}' has no transcript", e.id));
    const auto it = by_id.find(e.id);
    if (it == by_id.end()) throw DataError(fmt::format("no hypothesis for utterance '{}'", e.id));
    rep.rows.push_back(score_utterance(e.id, *e.transcript, it->second->hypothesis));
  }
  return rep;
}

WerReport evaluate(Transcriber& t, const media::Manifest& test) { return score_records(test, decode_manifest(t, test)); }

}  // namespace svsr::eval
