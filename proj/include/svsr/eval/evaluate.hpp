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

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "svsr/eval/wer.hpp"
#include "svsr/media/clip.hpp"
#include "svsr/media/manifest.hpp"
#include "svsr/tokenizer/bpe.hpp"
#include "svsr/trainer/augment.hpp"
#include "svsr/vsr/search.hpp"

namespace svsr::eval {

struct DecodeRecord {
  std::string id;
  std::string hypothesis;
  double logprob = 0.0;
  bool truncated = false;
  friend bool operator==(const DecodeRecord&, const DecodeRecord&) = default;
};

/// Turns a clip into text.
class Transcriber {
 public:
  virtual ~Transcriber() = default;
  virtual DecodeRecord transcribe(const media::ManifestEntry& entry, const media::VideoClip& clip) = 0;
};

/// Recognizer-backed transcriber; applies the evaluation transform first.
class VsrTranscriber : public Transcriber {
 public:
  VsrTranscriber(vsr::VsrModel model, tokenizer::Vocab vocab, vsr::DecodeOptions decode,
                 trainer::AugmentPolicy policy = trainer::AugmentPolicy::none());
  DecodeRecord transcribe(const media::ManifestEntry& entry, const media::VideoClip& clip) override;

 private:
  vsr::VsrModel model_;
  tokenizer::Vocab vocab_;
  vsr::DecodeOptions decode_;
  trainer::AugmentPolicy policy_;
};

/// Replays hypotheses decoded earlier (keyed by utterance id).
class HypothesisTranscriber : public Transcriber {
 public:
  explicit HypothesisTranscriber(std::vector<DecodeRecord> records);
  DecodeRecord transcribe(const media::ManifestEntry& entry, const media::VideoClip& clip) override;

 private:
  std::map<std::string, DecodeRecord> records_;
};

/// Decodes every entry of `test` (video + transcript) in manifest order.
std::vector<DecodeRecord> decode_manifest(Transcriber& t, const media::Manifest& test);

void write_decode_jsonl(const std::vector<DecodeRecord>& records, const std::filesystem::path& path);
std::vector<DecodeRecord> read_decode_jsonl(const std::filesystem::path& path);

/// Scores decode records against the manifest transcripts.
WerReport score_records(const media::Manifest& test, const std::vector<DecodeRecord>& records);

/// decode_manifest + score_records.
WerReport evaluate(Transcriber& t, const media::Manifest& test);

}  // namespace svsr::eval
