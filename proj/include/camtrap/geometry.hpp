// Copyright 2026 The camtrap-eval Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CAMTRAP_GEOMETRY_HPP_
#define CAMTRAP_GEOMETRY_HPP_

#include <algorithm>
#include <cmath>
#include <compare>
#include <string>

#include "camtrap/errors.hpp"

namespace camtrap {

// Axis-aligned rectangle in pixel coordinates, origin at the top-left.
// A valid box has finite, non-negative coordinates and strictly positive
// extent on both axes. Corner-pair convention: the area is simply
// (x_max - x_min) * (y_max - y_min), with no +1 pixel-count adjustment.
struct BoundingBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
  friend auto operator<=>(const BoundingBox&, const BoundingBox&) = default;
};

inline bool is_valid(const BoundingBox& b) {
  return std::isfinite(b.x_min) && std::isfinite(b.y_min) &&
         std::isfinite(b.x_max) && std::isfinite(b.y_max) &&
         b.x_min >= 0.0 && b.y_min >= 0.0 &&
         b.x_max > b.x_min && b.y_max > b.y_min;
}

inline void validate(const BoundingBox& b) {
  if (!is_valid(b)) {
    throw Error(ErrorKind::kInvalidGeometry,
                "invalid bounding box [" + std::to_string(b.x_min) + ", " +
                    std::to_string(b.y_min) + ", " + std::to_string(b.x_max) +
                    ", " + std::to_string(b.y_max) +
                    "]: need finite coordinates >= 0 and positive extent");
  }
}

/// Area in square pixels; strictly positive for a valid box.
inline double box_area(const BoundingBox& b) {
  validate(b);
  return (b.x_max - b.x_min) * (b.y_max - b.y_min);
}

/// Overlap area of two boxes; 0 when they are disjoint or merely touch.
inline double intersection_area(const BoundingBox& a, const BoundingBox& b) {
  const double w =
      std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double h =
      std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

/// Intersection over union: overlap divided by the combined footprint of
/// both boxes. Symmetric, 1 for identical boxes, 0 for disjoint ones.
inline double iou(const BoundingBox& a, const BoundingBox& b) {
  validate(a);
  validate(b);
  const double inter = intersection_area(a, b);
  if (inter == 0.0) return 0.0;
  const double area_a = (a.x_max - a.x_min) * (a.y_max - a.y_min);
  const double area_b = (b.x_max - b.x_min) * (b.y_max - b.y_min);
  return inter / (area_a + area_b - inter);
}

}  // namespace camtrap

#endif  // CAMTRAP_GEOMETRY_HPP_
