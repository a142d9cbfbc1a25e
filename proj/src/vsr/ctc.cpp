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

#include "svsr/vsr/ctc.hpp"

#include <algorithm>

#include <fmt/ranges.h>

#include "svsr/common/error.hpp"
#include "svsr/common/log.hpp"

namespace svsr::vsr {

namespace {
constexpr double kNeg = -1e30;
}

std::int64_t ctc_min_frames(const std::vector<int>& target) {
  std::int64_t n = static_cast<std::int64_t>(target.size());
  for (std::size_t i = 1; i < target.size(); ++i)
    if (target[i] == target[i - 1]) ++n;
  return n;
}

torch::Tensor ctc_loss(const torch::Tensor& log_probs, const torch::Tensor& input_lengths,
                       const std::vector<std::vector<int>>& targets, int blank) {
  if (log_probs.dim() != 3) throw ShapeError("ctc_loss expects log_probs [B, T, V]");
  const auto batch = log_probs.size(0);
  const auto frames = log_probs.size(1);
  const auto vocab = log_probs.size(2);
  if (static_cast<std::int64_t>(targets.size()) != batch || input_lengths.numel() != batch)
    throw ShapeError("ctc_loss batch size mismatch");

  auto lengths = input_lengths.to(torch::kCPU, torch::kInt64).contiguous();
  std::size_t max_target = 0;
  for (const auto& t : targets) max_target = std::max(max_target, t.size());
  const auto ext_len = static_cast<std::int64_t>(2 * max_target + 1);

  // Blank-augmented label sequences and the skip-transition mask.
  auto ext = torch::full({batch, ext_len}, blank, torch::kInt64);
  auto skip = torch::zeros({batch, ext_len}, torch::kBool);
  std::vector<bool> feasible(static_cast<std::size_t>(batch));
  auto ext_a = ext.accessor<std::int64_t, 2>();
  auto skip_a = skip.accessor<bool, 2>();
  for (std::int64_t b = 0; b < batch; ++b) {
    const auto& t = targets[static_cast<std::size_t>(b)];
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i] < 0 || t[i] >= vocab || t[i] == blank)
        throw ShapeError(fmt::format("ctc target id {} invalid (vocab {}, blank {})", t[i], vocab, blank));
      const auto s = static_cast<std::int64_t>(2 * i + 1);
      ext_a[b][s] = t[i];
      skip_a[b][s] = i > 0 && t[i] != t[i - 1];
    }
    const auto len = lengths[b].item<std::int64_t>();
    if (len < 1 || len > frames) throw ShapeError(fmt::format("input length {} outside [1, {}]", len, frames));
    feasible[static_cast<std::size_t>(b)] = ctc_min_frames(t) <= len;
  }

  const auto opts = log_probs.options();
  auto lp_ext = log_probs.gather(2, ext.unsqueeze(1).expand({batch, frames, ext_len}).to(log_probs.device()));
  auto neg = torch::full({batch, 1}, kNeg, opts);
  auto skip_d = skip.to(log_probs.device());

  auto init_mask = torch::full({ext_len}, kNeg, opts);
  init_mask.index_put_({torch::indexing::Slice(0, std::min<std::int64_t>(2, ext_len))}, 0.0);
  auto alpha = lp_ext.select(1, 0) + init_mask;

  auto len_d = lengths.to(log_probs.device());
  for (std::int64_t t = 1; t < frames; ++t) {
    auto a1 = alpha;
    auto a2 = torch::cat({neg, alpha.slice(1, 0, ext_len - 1)}, 1);
    auto a3 = torch::cat({neg, neg, alpha.slice(1, 0, std::max<std::int64_t>(ext_len - 2, 0))}, 1).slice(1, 0, ext_len);
    a3 = torch::where(skip_d, a3, torch::full_like(a3, kNeg));
    auto next = torch::logsumexp(torch::stack({a1, a2, a3}), 0) + lp_ext.select(1, t);
    auto active = (len_d > t).unsqueeze(1);
    alpha = torch::where(active, next, alpha);
  }

  std::vector<torch::Tensor> losses;
  losses.reserve(static_cast<std::size_t>(batch));
  for (std::int64_t b = 0; b < batch; ++b) {
    const auto& t = targets[static_cast<std::size_t>(b)];
    if (!feasible[static_cast<std::size_t>(b)]) {
      log::warn("ctc: target of {} tokens needs {} frames but only {} available; using sentinel loss", t.size(),
                ctc_min_frames(t), lengths[b].item<std::int64_t>());
      losses.push_back(torch::full({}, kCtcInfeasibleLoss, opts));
      continue;
    }
    const auto last = static_cast<std::int64_t>(2 * t.size());
    auto row = alpha[b];
    auto ll = t.empty() ? row[0] : torch::logsumexp(row.slice(0, last - 1, last + 1), 0);
    losses.push_back(-ll);
  }
  return torch::stack(losses);
}

torch::Tensor ctc_loss(const torch::Tensor& logits, const std::vector<int>& target, int blank) {
  if (logits.dim() != 2) throw ShapeError("ctc_loss expects logits [T, V]");
  auto lp = torch::log_softmax(logits, 1).unsqueeze(0);
  auto len = torch::tensor({logits.size(0)}, torch::kInt64);
  return ctc_loss(lp, len, {target}, blank)[0];
}

}  // namespace svsr::vsr
