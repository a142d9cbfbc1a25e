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

#include <string_view>
#include <vector>

#include <json.hpp>

namespace svsr::vsr {

struct VsrConfig {
  int vocab_size = 256;

  // Visual front-end: 3D conv stem then residual 2D stages (stride 1, 2, 2, 2).
  int frontend_stem = 8;
  std::vector<int> frontend_channels{8, 16, 32, 64};
  int frontend_blocks_per_stage = 1;
  double input_mean = 0.421;
  double input_std = 0.165;

  // Conformer encoder.
  int encoder_depth = 4;
  int d_model = 128;
  int ff_dim = 512;
  int heads = 4;
  int conv_kernel = 15;
  int max_relative_position = 64;

  // Transformer decoder.
  int decoder_depth = 1;
  double dropout = 0.1;

  double ctc_weight = 0.1;

  int frontend_dim() const { return frontend_channels.back(); }
  /// Throws ConfigError on inconsistent values.
  void validate() const;

  /// desk, desk-small, base, large. The two desk presets share the front-end.
  static VsrConfig preset(std::string_view name);

  nlohmann::json to_json() const;
  static VsrConfig from_json(const nlohmann::json& j);
};

}  // namespace svsr::vsr
