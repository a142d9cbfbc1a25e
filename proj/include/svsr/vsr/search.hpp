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

#include <functional>
#include <vector>

#include <torch/torch.h>

#include "svsr/media/clip.hpp"
#include "svsr/tokenizer/bpe.hpp"
#include "svsr/vsr/model.hpp"

namespace svsr::vsr {

/// Log-probabilities of the next token for each prefix (all starting with
/// sos). Returns one row of length V per prefix.
using NextTokenScorer = std::function<std::vector<std::vector<double>>(const std::vector<std::vector<int>>& prefixes)>;

struct SearchOptions {
  int beam = 1;
  int max_length = 0;  // tokens before eos; callers usually pass 2 * T
  tokenizer::SpecialIds specials{};
};

struct Hypothesis {
  std::vector<int> tokens;  // without sos / eos
  double logprob = 0.0;     // includes the eos step when finished
  bool truncated = false;   // length cap hit before eos

  /// logprob divided by the number of scored steps (tokens + eos if finished).
  double normalized() const;
};

/// beam == 1: greedy argmax; beam > 1: length-normalised beam search.
/// Tokens blank, pad and sos are never emitted.
Hypothesis search(const NextTokenScorer& scorer, const SearchOptions& opts);

/// Scorer backed by a recognizer for one encoded utterance z_e [1, T, D].
NextTokenScorer model_scorer(VsrModel& model, const torch::Tensor& z_e);

struct DecodeOptions {
  int beam = 1;
  double max_length_factor = 2.0;  // cap = factor * T
};

/// Runs the model in eval mode without gradients.
Hypothesis decode(VsrModel& model, const media::VideoClip& clip, const DecodeOptions& opts);

/// Sum of teacher-forced log-probabilities of tokens + eos.
double sequence_logprob(VsrModel& model, const torch::Tensor& z_e, const std::vector<int>& tokens);

}  // namespace svsr::vsr
