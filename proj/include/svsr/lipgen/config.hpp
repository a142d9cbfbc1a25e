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

#include <string>
#include <string_view>

#include <json.hpp>

namespace svsr::lipgen {

/// Architecture of the lip animation model. Channel counts follow the
/// reference layer tables and are multiplied by `width` (1.0 = full size).
struct LamModelConfig {
  double width = 0.25;
  int chunk_samples = 3200;  // 200 ms at 16 kHz
  int rotation_dim = 9;      // flattened 3x3 rotation
  int decoder_convs_per_level = 2;

  /// round(full * width), at least one channel.
  int channels(int full) const;
  int image_embedding() const { return channels(512); }
  int speech_embedding() const { return channels(256); }
  int style_dim() const { return image_embedding() + speech_embedding() + rotation_dim; }

  nlohmann::json to_json() const;
  static LamModelConfig from_json(const nlohmann::json& j);
};

/// Loss weights of the lip animation objective.
struct LamLossWeights {
  double img = 1.0;
  double seq = 0.2;
  double rec = 300.0;
  double visual = 0.0;
  double logits = 0.0;

  bool uses_recognizer() const { return visual > 0.0 || logits > 0.0; }

  /// Named configurations: baseline, lrs3-vsr-vl, lrs3-vsr-v, lrs3-vsr-l,
  /// avox. Names are case-insensitive.
  static LamLossWeights preset(std::string_view name);

  nlohmann::json to_json() const;
  static LamLossWeights from_json(const nlohmann::json& j);
};

}  // namespace svsr::lipgen
