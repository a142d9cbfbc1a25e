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

#include "svsr/media/rotation.hpp"

#include <cmath>

#include <fmt/format.h>

#include "svsr/common/error.hpp"

namespace svsr::media {

RotationSequence RotationSequence::identity(std::size_t n) {
  return RotationSequence{std::vector<Rotation>(n, kIdentityRotation)};
}

void RotationSequence::validate(double tol) const {
  for (std::size_t i = 0; i < matrices.size(); ++i) {
    const Rotation& r = matrices[i];
    const double det = r[0] * (r[4] * r[8] - r[5] * r[7]) - r[1] * (r[3] * r[8] - r[5] * r[6]) +
                       r[2] * (r[3] * r[7] - r[4] * r[6]);
    if (!(std::fabs(det - 1.0) <= tol))
      throw DataError(fmt::format("rotation {} has determinant {}", i, det));
    double worst = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        double dot = 0.0;
        for (int k = 0; k < 3; ++k) dot += r[k * 3 + a] * r[k * 3 + b];
        worst = std::max(worst, std::fabs(dot - (a == b ? 1.0 : 0.0)));
      }
    if (!(worst <= tol)) throw DataError(fmt::format("rotation {} is not orthonormal (max |R^T R - I| = {})", i, worst));
  }
  if (!matrices.empty()) {
    for (int j = 0; j < 9; ++j)
      if (std::fabs(matrices[0][j] - kIdentityRotation[j]) > tol)
        throw DataError("first rotation must be the identity (rotations are relative to the first frame)");
  }
}

}  // namespace svsr::media
