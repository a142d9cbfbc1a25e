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

#include <array>
#include <cstddef>
#include <vector>

namespace svsr::media {

using Rotation = std::array<double, 9>;  // row-major 3x3

inline constexpr Rotation kIdentityRotation{1, 0, 0, 0, 1, 0, 0, 0, 1};

/// Per-frame head rotations relative to the first frame.
struct RotationSequence {
  std::vector<Rotation> matrices;

  static RotationSequence identity(std::size_t n);
  std::size_t size() const { return matrices.size(); }

  /// Rejects any matrix with |det - 1| > tol or max|R^T R - I| > tol, and a
  /// first element that is not the identity.
  void validate(double tol = 1e-5) const;
};

}  // namespace svsr::media
