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

#include "svsr/media/sampling.hpp"

#include <fmt/format.h>

#include "svsr/common/error.hpp"

namespace svsr::media {

std::vector<std::size_t> sample_frames(std::size_t num_frames, std::size_t k, Rng& rng) {
  if (k < 1 || k > num_frames)
    throw ConfigError(fmt::format("cannot sample {} frames from a clip of {}", k, num_frames));
  // Selection sampling (Knuth 3.4.2, algorithm S): ordered output, exact
  // uniform distribution over k-subsets.
  std::vector<std::size_t> picked;
  picked.reserve(k);
  std::size_t needed = k;
  for (std::size_t i = 0; i < num_frames && needed > 0; ++i) {
    const std::size_t remaining = num_frames - i;
    if (uniform_index(rng, remaining) < needed) {
      picked.push_back(i);
      --needed;
    }
  }
  return picked;
}

}  // namespace svsr::media
