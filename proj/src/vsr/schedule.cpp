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

#include "svsr/vsr/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "svsr/common/error.hpp"

namespace svsr::vsr {

WarmupCosineSchedule::WarmupCosineSchedule(double peak, std::int64_t warmup, std::int64_t total)
    : peak_(peak), warmup_(warmup), total_(total) {
  if (peak <= 0.0 || warmup < 0 || total < 1 || warmup > total)
    throw ConfigError("schedule needs peak > 0 and 0 <= warmup <= total");
}

double WarmupCosineSchedule::operator()(std::int64_t step) const {
  if (step < warmup_) return peak_ * static_cast<double>(step) / static_cast<double>(warmup_);
  if (total_ == warmup_) return peak_;
  const double progress = std::clamp(static_cast<double>(step - warmup_) / static_cast<double>(total_ - warmup_), 0.0, 1.0);
  return peak_ * 0.5 * (1.0 + std::cos(std::numbers::pi * progress));
}

}  // namespace svsr::vsr
