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

#include "svsr/vsr/config.hpp"

#include <fmt/format.h>

#include "svsr/common/error.hpp"

namespace svsr::vsr {

void VsrConfig::validate() const {
  if (vocab_size < 6) throw ConfigError(fmt::format("vocab_size={} too small", vocab_size));
  if (frontend_channels.empty() || frontend_stem < 1 || frontend_blocks_per_stage < 1)
    throw ConfigError("front-end needs a stem and at least one residual stage");
  if (d_model < 1 || heads < 1 || d_model % heads != 0)
    throw ConfigError(fmt::format("d_model={} not divisible by heads={}", d_model, heads));
  if (encoder_depth < 0 || decoder_depth < 1) throw ConfigError("encoder_depth >= 0 and decoder_depth >= 1 required");
  if (conv_kernel < 1 || conv_kernel % 2 == 0) throw ConfigError("conv_kernel must be odd");
  if (ctc_weight < 0.0 || ctc_weight > 1.0) throw ConfigError(fmt::format("ctc_weight={} outside [0, 1]", ctc_weight));
  if (dropout < 0.0 || dropout >= 1.0) throw ConfigError("dropout must be in [0, 1)");
  if (input_std <= 0.0) throw ConfigError("input_std must be positive");
}

VsrConfig VsrConfig::preset(std::string_view name) {
  VsrConfig c;
  if (name == "desk") return c;
  if (name == "desk-small") {
    c.encoder_depth = 2;
    c.d_model = 96;
    c.ff_dim = 384;
    c.heads = 4;
    return c;
  }
  if (name == "base" || name == "large") {
    c.frontend_stem = 64;
    c.frontend_channels = {64, 128, 256, 512};
    c.frontend_blocks_per_stage = 2;
    c.vocab_size = 5000;
    c.heads = 16;
    if (name == "base") {
      c.encoder_depth = 12, c.d_model = 768, c.ff_dim = 3072, c.decoder_depth = 6;
    } else {
      c.encoder_depth = 24, c.d_model = 1024, c.ff_dim = 4096, c.decoder_depth = 9;
    }
    c.conv_kernel = 31;
    return c;
  }
  throw ConfigError(fmt::format("unknown VSR preset '{}' (desk, desk-small, base, large)", name));
}

nlohmann::json VsrConfig::to_json() const {
  return {{"vocab_size", vocab_size},
          {"frontend_stem", frontend_stem},
          {"frontend_channels", frontend_channels},
          {"frontend_blocks_per_stage", frontend_blocks_per_stage},
          {"input_mean", input_mean},
          {"input_std", input_std},
          {"encoder_depth", encoder_depth},
          {"d_model", d_model},
          {"ff_dim", ff_dim},
          {"heads", heads},
          {"conv_kernel", conv_kernel},
          {"max_relative_position", max_relative_position},
          {"decoder_depth", decoder_depth},
          {"dropout", dropout},
          {"ctc_weight", ctc_weight}};
}

VsrConfig VsrConfig::from_json(const nlohmann::json& j) {
  VsrConfig c;
  c.vocab_size = j.value("vocab_size", c.vocab_size);
  c.frontend_stem = j.value("frontend_stem", c.frontend_stem);
  c.frontend_channels = j.value("frontend_channels", c.frontend_channels);
  c.frontend_blocks_per_stage = j.value("frontend_blocks_per_stage", c.frontend_blocks_per_stage);
  c.input_mean = j.value("input_mean", c.input_mean);
  c.input_std = j.value("input_std", c.input_std);
  c.encoder_depth = j.value("encoder_depth", c.encoder_depth);
  c.d_model = j.value("d_model", c.d_model);
  c.ff_dim = j.value("ff_dim", c.ff_dim);
  c.heads = j.value("heads", c.heads);
  c.conv_kernel = j.value("conv_kernel", c.conv_kernel);
  c.max_relative_position = j.value("max_relative_position", c.max_relative_position);
  c.decoder_depth = j.value("decoder_depth", c.decoder_depth);
  c.dropout = j.value("dropout", c.dropout);
  c.ctc_weight = j.value("ctc_weight", c.ctc_weight);
  c.validate();
  return c;
}

}  // namespace svsr::vsr
