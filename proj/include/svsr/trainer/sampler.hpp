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

#include <cstdint>
#include <functional>
#include <vector>

#include "svsr/common/rng.hpp"

namespace svsr::trainer {

/// Per-dataset sampling weights. Empty weights mean "proportional to dataset
/// size", i.e. the plain union of the datasets.
struct MixPolicy {
  std::vector<double> weights;
};

struct SampleRef {
  std::size_t dataset = 0;
  std::size_t index = 0;
  friend bool operator==(const SampleRef&, const SampleRef&) = default;
};

/// Draws (dataset, item) pairs with replacement: dataset d with probability
/// w_d / sum(w), then an item uniformly within it.
class MixedSampler {
 public:
  MixedSampler(std::vector<std::size_t> dataset_sizes, const MixPolicy& policy, std::uint64_t seed);
  SampleRef draw();
  const std::vector<double>& probabilities() const { return probs_; }

 private:
  std::vector<std::size_t> sizes_;
  std::vector<double> probs_;
  std::vector<double> cumulative_;
  Rng rng_;
};

struct Batch {
  std::vector<SampleRef> items;
  std::int64_t frames = 0;
};

/// Groups sampler draws into batches whose total frame count never exceeds
/// `budget`. A draw that would overflow starts the next batch; samples longer
/// than the budget on their own are skipped with a warning.
class FrameBudgetBatcher {
 public:
  using FrameCount = std::function<std::int64_t(const SampleRef&)>;
  FrameBudgetBatcher(MixedSampler sampler, FrameCount frames, std::int64_t budget, std::size_t max_items = 0);
  Batch next();

 private:
  MixedSampler sampler_;
  FrameCount frames_;
  std::int64_t budget_;
  std::size_t max_items_;
  bool has_pending_ = false;
  SampleRef pending_;
};

}  // namespace svsr::trainer
