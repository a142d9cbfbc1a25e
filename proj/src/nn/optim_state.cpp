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

#include "svsr/nn/optim_state.hpp"

#include <fmt/format.h>

#include "svsr/common/error.hpp"

namespace svsr::nn {

namespace {

template <typename Optimizer, typename State>
void save_impl(Checkpoint& ckpt, const std::string& prefix, Optimizer& opt) {
  auto& params = opt.param_groups().at(0).params();
  auto& states = opt.state();
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto it = states.find(params[i].unsafeGetTensorImpl());
    if (it == states.end()) continue;
    auto& s = static_cast<State&>(*it->second);
    const std::string base = fmt::format("{}{}.", prefix, i);
    ckpt.put(base + "step", torch::tensor({static_cast<std::int64_t>(s.step())}, torch::kInt64));
    ckpt.put(base + "exp_avg", s.exp_avg());
    ckpt.put(base + "exp_avg_sq", s.exp_avg_sq());
  }
}

template <typename Optimizer, typename State>
void load_impl(const Checkpoint& ckpt, const std::string& prefix, Optimizer& opt) {
  auto& params = opt.param_groups().at(0).params();
  auto& states = opt.state();
  for (std::size_t i = 0; i < params.size(); ++i) {
    const std::string base = fmt::format("{}{}.", prefix, i);
    const auto* step = ckpt.find(base + "step");
    if (step == nullptr) continue;
    const auto* m = ckpt.find(base + "exp_avg");
    const auto* v = ckpt.find(base + "exp_avg_sq");
    if (m == nullptr || v == nullptr || m->sizes() != params[i].sizes())
      throw ShapeError("optimizer state " + base + " does not match the model");
    auto s = std::make_unique<State>();
    s->step(step->template item<std::int64_t>());
    s->exp_avg(m->clone());
    s->exp_avg_sq(v->clone());
    states[params[i].unsafeGetTensorImpl()] = std::move(s);
  }
}

}  // namespace

void save_optimizer(Checkpoint& ckpt, const std::string& prefix, torch::optim::Adam& opt) {
  save_impl<torch::optim::Adam, torch::optim::AdamParamState>(ckpt, prefix, opt);
}
void load_optimizer(const Checkpoint& ckpt, const std::string& prefix, torch::optim::Adam& opt) {
  load_impl<torch::optim::Adam, torch::optim::AdamParamState>(ckpt, prefix, opt);
}
void save_optimizer(Checkpoint& ckpt, const std::string& prefix, torch::optim::AdamW& opt) {
  save_impl<torch::optim::AdamW, torch::optim::AdamWParamState>(ckpt, prefix, opt);
}
void load_optimizer(const Checkpoint& ckpt, const std::string& prefix, torch::optim::AdamW& opt) {
  load_impl<torch::optim::AdamW, torch::optim::AdamWParamState>(ckpt, prefix, opt);
}

}  // namespace svsr::nn
