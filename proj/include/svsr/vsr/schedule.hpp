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

namespace svsr::vsr {

/// Linear warm-up from 0 to `peak` over `warmup` steps, then cosine decay to
/// 0 at `total` steps.
class WarmupCosineSchedule {
 public:
  WarmupCosineSchedule(double peak, std::int64_t warmup, std::int64_t total);
  double operator()(std::int64_t step) const;

 private:
  double peak_;
  std::int64_t warmup_, total_;
};

}  // namespace svsr::vsr
