// Copyright 2026 The focusdetr Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <vector>

#include "focusdetr/geometry/pyramid.hpp"
#include "focusdetr/numerics/tensor.hpp"

namespace fdetr::geometry {

/// Ground-truth box in image pixels, center-size form.
struct Box {
  double x = 0.0;  // center x
  double y = 0.0;  // center y
  double w = 0.0;
  double h = 0.0;
  std::size_t cls = 0;

  friend bool operator==(const Box&, const Box&) = default;
};

struct BoxSet {
  std::vector<Box> boxes;

  /// Throws on non-positive sizes or a class id outside [0, num_classes).
  void validate(std::size_t num_classes) const;
};

/// max(h/2, w/2): the scale used to route a box to pyramid levels.
double box_scale(const Box& box);

/// Value standing in for +∞ as the last interval's upper bound.
inline constexpr double kOpenEnd = 999999.0;

struct ScaleInterval {
  double begin = 0.0;  // exclusive
  double end = 0.0;    // inclusive

  bool contains(double d) const { return begin < d && d <= end; }
  friend bool operator==(const ScaleInterval&, const ScaleInterval&) = default;
};

/// Per-level half-open scale ranges (begin, end]; adjacent ranges may overlap.
class ScaleIntervals {
 public:
  explicit ScaleIntervals(std::vector<ScaleInterval> intervals);

  /// {(-1, 64], (64, 256], (128, 512], (256, ∞]}.
  static ScaleIntervals overlapping_default();
  /// {(-1, 64], (64, 128], (128, 256], (256, ∞]}.
  static ScaleIntervals non_overlapping_small();
  /// {(-1, 128], (128, 256], (256, 512], (512, ∞]}.
  static ScaleIntervals non_overlapping_large();
  /// 50%-overlap recurrence: begin_{l+1} = (begin_l + end_l) / 2, with
  /// end_l = first_end · growth^l and the last end open. begin_0 = -1.
  static ScaleIntervals from_recurrence(std::size_t levels, double first_end,
                                        double growth);

  std::size_t size() const { return intervals_.size(); }
  const ScaleInterval& operator[](std::size_t l) const { return intervals_.at(l); }
  const std::vector<ScaleInterval>& intervals() const { return intervals_; }

 private:
  std::vector<ScaleInterval> intervals_;
};

/// Per-level binary maps, level l shaped [H_l × W_l].
struct LabelPyramid {
  std::vector<Tensor> levels;

  std::size_t positives() const;
  friend bool operator==(const LabelPyramid&, const LabelPyramid&) = default;
};

/// Token (l, i, j) is foreground iff some box's extent, clipped to the image,
/// contains the token anchor and the box scale lies in level l's interval.
LabelPyramid assign_labels(const BoxSet& boxes, const PyramidGeometry& geom,
                           const ScaleIntervals& intervals);

/// Literal per-token, per-box reference for assign_labels. Shares no code with
/// it; kept in the library so tools and acceptance runs can cross-check.
LabelPyramid assign_labels_oracle(const BoxSet& boxes,
                                  const PyramidGeometry& geom,
                                  const ScaleIntervals& intervals);

}  // namespace fdetr::geometry
