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

#include "svsr/trainer/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "svsr/common/error.hpp"
#include "svsr/common/log.hpp"

namespace svsr::trainer {

MixedSampler::MixedSampler(std::vector<std::size_t> dataset_sizes, const MixPolicy& policy, std::uint64_t seed)
    : sizes_(std::move(dataset_sizes)), rng_(make_rng({seed, 0x6d6978ULL})) {
  if (sizes_.empty()) throw ConfigError("mixed sampler needs at least one dataset");
  std::vector<double> w = policy.weights;
  if (w.empty())
    for (auto s : sizes_) w.push_back(static_cast<double>(s));
  if (w.size() != sizes_.size())
    throw ConfigError(fmt::format("{} weights given for {} datasets", w.size(), sizes_.size()));
  double total = 0.0;
  for (std::size_t d = 0; d < w.size(); ++d) {
    if (!(w[d] >= 0.0) || !std::isfinite(w[d])) throw ConfigError("mixing weights must be finite and nonnegative");
    if (w[d] > 0.0 && sizes_[d] == 0) throw DataError(fmt::format("dataset {} is empty but has weight {}", d, w[d]));
    total += w[d];
  }
  if (total <= 0.0) throw ConfigError("mixing weights sum to zero");
  double acc = 0.0;
  for (double x : w) {
    probs_.push_back(x / total);
    acc += x / total;
    cumulative_.push_back(acc);
  }
}

SampleRef MixedSampler::draw() {
  const double u = uniform01(rng_);
  std::size_t d = probs_.size();
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    if (probs_[i] > 0.0) {
      d = i;
      if (u < cumulative_[i]) break;
    }
  }
  return {d, static_cast<std::size_t>(uniform_index(rng_, sizes_[d]))};
}

FrameBudgetBatcher::FrameBudgetBatcher(MixedSampler sampler, FrameCount frames, std::int64_t budget,
                                       std::size_t max_items)
    : sampler_(std::move(sampler)), frames_(std::move(frames)), budget_(budget), max_items_(max_items) {
  if (budget_ < 1) throw ConfigError("frame budget must be positive");
}

Batch FrameBudgetBatcher::next() {
  Batch batch;
  int skipped = 0;
  while (true) {
    SampleRef ref;
    if (has_pending_) {
      ref = pending_;
      has_pending_ = false;
    } else {
      ref = sampler_.draw();
    }
    const auto n = frames_(ref);
    if (n > budget_) {
      log::warn("skipping sample {}/{} with {} frames above the batch budget of {}", ref.dataset, ref.index, n, budget_);
      if (++skipped > 10000) throw DataError("no sample fits inside the frame budget");
      continue;
    }
    if (batch.frames + n > budget_ || (max_items_ > 0 && batch.items.size() == max_items_)) {
      pending_ = ref;
      has_pending_ = true;
      return batch;
    }
    batch.items.push_back(ref);
    batch.frames += n;
  }
}

}  // namespace svsr::trainer
