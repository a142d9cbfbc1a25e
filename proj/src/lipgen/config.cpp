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

#include "svsr/lipgen/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "svsr/common/error.hpp"

namespace svsr::lipgen {

int LamModelConfig::channels(int full) const {
  return std::max(1, static_cast<int>(std::lround(full * width)));
}

nlohmann::json LamModelConfig::to_json() const {
  return {{"width", width},
          {"chunk_samples", chunk_samples},
          {"rotation_dim", rotation_dim},
          {"decoder_convs_per_level", decoder_convs_per_level}};
}

LamModelConfig LamModelConfig::from_json(const nlohmann::json& j) {
  LamModelConfig c;
  c.width = j.value("width", c.width);
  c.chunk_samples = j.value("chunk_samples", c.chunk_samples);
  c.rotation_dim = j.value("rotation_dim", c.rotation_dim);
  c.decoder_convs_per_level = j.value("decoder_convs_per_level", c.decoder_convs_per_level);
  if (!(c.width > 0.0)) throw ConfigError("lip animation width must be positive");
  return c;
}

LamLossWeights LamLossWeights::preset(std::string_view name) {
  std::string n(name);
  std::transform(n.begin(), n.end(), n.begin(), [](unsigned char c) { return std::tolower(c); });
  LamLossWeights w;
  if (n == "baseline") return w;
  if (n == "lrs3-vsr-vl") {
    w.visual = 250.0;
    w.logits = 10.0;
    return w;
  }
  if (n == "lrs3-vsr-v") {
    w.visual = 250.0;
    w.logits = 0.0;
    return w;
  }
  if (n == "lrs3-vsr-l") {
    w.visual = 0.0;
    w.logits = 10.0;
    return w;
  }
  if (n == "avox" || n == "lrs3-avox-vsr") {
    w.visual = 500.0;
    w.logits = 10.0;
    return w;
  }
  throw ConfigError("unknown lip animation preset '" + std::string(name) +
                    "' (expected baseline, lrs3-vsr-vl, lrs3-vsr-v, lrs3-vsr-l, avox)");
}

nlohmann::json LamLossWeights::to_json() const {
  return {{"img", img}, {"seq", seq}, {"rec", rec}, {"visual", visual}, {"logits", logits}};
}

LamLossWeights LamLossWeights::from_json(const nlohmann::json& j) {
  LamLossWeights w;
  w.img = j.value("img", w.img);
  w.seq = j.value("seq", w.seq);
  w.rec = j.value("rec", w.rec);
  w.visual = j.value("visual", w.visual);
  w.logits = j.value("logits", w.logits);
  for (double v : {w.img, w.seq, w.rec, w.visual, w.logits})
    if (!(v >= 0.0)) throw ConfigError("lip animation loss weights must be nonnegative");
  return w;
}

}  // namespace svsr::lipgen
