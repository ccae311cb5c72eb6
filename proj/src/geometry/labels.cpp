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

#include "focusdetr/geometry/labels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace fdetr::geometry {

void BoxSet::validate(std::size_t num_classes) const {
  for (std::size_t b = 0; b < boxes.size(); ++b) {
    const Box& box = boxes[b];
    if (!(box.w > 0.0) || !(box.h > 0.0) || !std::isfinite(box.w) ||
        !std::isfinite(box.h) || !std::isfinite(box.x) || !std::isfinite(box.y)) {
      throw std::invalid_argument(fmt::format(
          "box {} has invalid geometry (x={}, y={}, w={}, h={})", b, box.x, box.y,
          box.w, box.h));
    }
    if (box.cls >= num_classes) {
      throw std::invalid_argument(
          fmt::format("box {} class {} outside [0, {})", b, box.cls, num_classes));
    }
  }
}

double box_scale(const Box& box) { return std::max(box.h / 2.0, box.w / 2.0); }

ScaleIntervals::ScaleIntervals(std::vector<ScaleInterval> intervals)
    : intervals_(std::move(intervals)) {
  if (intervals_.empty()) throw std::invalid_argument("ScaleIntervals: empty");
  for (std::size_t l = 0; l < intervals_.size(); ++l) {
    const auto& iv = intervals_[l];
    if (!(iv.begin < iv.end)) {
      throw std::invalid_argument(fmt::format(
          "ScaleIntervals: level {} has begin {} >= end {}", l, iv.begin, iv.end));
    }
    if (l > 0 && !(intervals_[l - 1].begin < iv.begin)) {
      throw std::invalid_argument(fmt::format(
          "ScaleIntervals: begins must increase strictly (level {})", l));
    }
  }
  if (intervals_.back().end < kOpenEnd) {
    throw std::invalid_argument("ScaleIntervals: last interval must be open-ended");
  }
}

ScaleIntervals ScaleIntervals::overlapping_default() {
  return ScaleIntervals({{-1, 64}, {64, 256}, {128, 512}, {256, kOpenEnd}});
}

ScaleIntervals ScaleIntervals::non_overlapping_small() {
  return ScaleIntervals({{-1, 64}, {64, 128}, {128, 256}, {256, kOpenEnd}});
}

ScaleIntervals ScaleIntervals::non_overlapping_large() {
  return ScaleIntervals({{-1, 128}, {128, 256}, {256, 512}, {512, kOpenEnd}});
}

ScaleIntervals ScaleIntervals::from_recurrence(std::size_t levels, double first_end,
                                               double growth) {
  if (levels == 0 || !(first_end > 0.0) || !(growth > 1.0)) {
    throw std::invalid_argument("from_recurrence: need levels >= 1, first_end > 0, growth > 1");
  }
  std::vector<ScaleInterval> out;
  double begin = -1.0;
  double end = first_end;
  for (std::size_t l = 0; l < levels; ++l) {
    const bool last = l + 1 == levels;
    out.push_back({begin, last ? kOpenEnd : end});
    begin = (begin + end) / 2.0;
    end *= growth;
  }
  return ScaleIntervals(std::move(out));
}

std::size_t LabelPyramid::positives() const {
  std::size_t n = 0;
  for (const auto& lv : levels) {
    for (double v : lv.data()) n += v != 0.0 ? 1 : 0;
  }
  return n;
}

namespace {

// Anchors inside [lo, hi] along one axis: anchor(i) = offset + i·stride,
// i ∈ [0, count). The arithmetic estimate is widened by one on each side and
// then filtered with the exact comparison so boundary rounding cannot differ
// from a per-token test.
struct IndexRange {
  std::size_t first = 0;
  std::size_t last = 0;  // exclusive
};

IndexRange anchors_within(double lo, double hi, std::size_t stride,
                          std::size_t count) {
  const double offset = static_cast<double>(stride / 2);
  const double s = static_cast<double>(stride);
  const double first_est = std::floor((lo - offset) / s) - 1.0;
  const double last_est = std::floor((hi - offset) / s) + 1.0;
  const auto clampi = [count](double v) {
    return static_cast<std::size_t>(std::clamp(v, 0.0, static_cast<double>(count)));
  };
  std::size_t first = clampi(first_est);
  std::size_t last = clampi(last_est + 1.0);
  while (first < last && offset + static_cast<double>(first) * s < lo) ++first;
  while (last > first && offset + static_cast<double>(last - 1) * s > hi) --last;
  return {first, last};
}

}  // namespace

LabelPyramid assign_labels(const BoxSet& boxes, const PyramidGeometry& geom,
                           const ScaleIntervals& intervals) {
  if (intervals.size() != geom.num_levels()) {
    throw std::invalid_argument(fmt::format(
        "assign_labels: {} intervals for {} levels", intervals.size(), geom.num_levels()));
  }
  LabelPyramid labels;
  for (const auto& lv : geom.levels()) labels.levels.emplace_back(Shape{lv.height, lv.width});

  const double img_w = static_cast<double>(geom.image_width());
  const double img_h = static_cast<double>(geom.image_height());
  for (const Box& box : boxes.boxes) {
    const double d = box_scale(box);
    const double x_lo = std::max(box.x - box.w / 2.0, 0.0);
    const double x_hi = std::min(box.x + box.w / 2.0, img_w);
    const double y_lo = std::max(box.y - box.h / 2.0, 0.0);
    const double y_hi = std::min(box.y + box.h / 2.0, img_h);
    if (x_lo > x_hi || y_lo > y_hi) continue;
    for (std::size_t l = 0; l < geom.num_levels(); ++l) {
      if (!intervals[l].contains(d)) continue;
      const LevelShape& lv = geom.level(l);
      const IndexRange cols = anchors_within(x_lo, x_hi, lv.stride, lv.width);
      const IndexRange rows = anchors_within(y_lo, y_hi, lv.stride, lv.height);
      Tensor& map = labels.levels[l];
      for (std::size_t j = rows.first; j < rows.last; ++j) {
        for (std::size_t i = cols.first; i < cols.last; ++i) map.at(j, i) = 1.0;
      }
    }
  }
  return labels;
}

LabelPyramid assign_labels_oracle(const BoxSet& boxes, const PyramidGeometry& geom,
                                  const ScaleIntervals& intervals) {
  if (intervals.size() != geom.num_levels()) {
    throw std::invalid_argument("assign_labels_oracle: interval count mismatch");
  }
  LabelPyramid labels;
  for (std::size_t l = 0; l < geom.num_levels(); ++l) {
    const std::size_t stride = geom.level(l).stride;
    const std::size_t width = geom.level(l).width;
    const std::size_t height = geom.level(l).height;
    Tensor map(Shape{height, width});
    for (std::size_t j = 0; j < height; ++j) {
      for (std::size_t i = 0; i < width; ++i) {
        const double ax = static_cast<double>(stride / 2 + i * stride);
        const double ay = static_cast<double>(stride / 2 + j * stride);
        bool hit = false;
        for (const Box& b : boxes.boxes) {
          const double half_w = b.w / 2.0;
          const double half_h = b.h / 2.0;
          const double d = half_h > half_w ? half_h : half_w;
          const bool scale_ok =
              d > intervals[l].begin && d <= intervals[l].end;
          const double left = std::max(b.x - half_w, 0.0);
          const double right = std::min(b.x + half_w,
                                        static_cast<double>(geom.image_width()));
          const double top = std::max(b.y - half_h, 0.0);
          const double bottom = std::min(b.y + half_h,
                                         static_cast<double>(geom.image_height()));
          const bool inside = left <= ax && ax <= right && top <= ay && ay <= bottom;
          if (scale_ok && inside) {
            hit = true;
            break;
          }
        }
        map[j * width + i] = hit ? 1.0 : 0.0;
      }
    }
    labels.levels.push_back(std::move(map));
  }
  return labels;
}

}  // namespace fdetr::geometry
