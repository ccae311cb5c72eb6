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

#include "focusdetr/geometry/pyramid.hpp"

#include <stdexcept>

#include <fmt/format.h>

namespace fdetr::geometry {
namespace {

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

}  // namespace

PyramidGeometry::PyramidGeometry(std::size_t image_width,
                                 std::size_t image_height,
                                 std::vector<std::size_t> strides,
                                 std::size_t channels)
    : image_width_(image_width), image_height_(image_height), channels_(channels) {
  if (image_width == 0 || image_height == 0) {
    throw std::invalid_argument("PyramidGeometry: empty image");
  }
  if (strides.empty()) throw std::invalid_argument("PyramidGeometry: no levels");
  if (channels == 0) throw std::invalid_argument("PyramidGeometry: zero channels");
  for (std::size_t l = 0; l < strides.size(); ++l) {
    if (strides[l] == 0 || (l > 0 && strides[l] <= strides[l - 1])) {
      throw std::invalid_argument(
          fmt::format("PyramidGeometry: strides must be positive and strictly "
                      "increasing (level {} has stride {})",
                      l, strides[l]));
    }
    levels_.push_back({strides[l], ceil_div(image_width, strides[l]),
                       ceil_div(image_height, strides[l])});
  }
}

PyramidGeometry::PyramidGeometry(std::size_t image_width,
                                 std::size_t image_height, std::size_t channels)
    : PyramidGeometry(image_width, image_height,
                      {std::begin(kDefaultStrides), std::end(kDefaultStrides)},
                      channels) {}

std::size_t PyramidGeometry::total_tokens() const {
  std::size_t n = 0;
  for (const auto& lv : levels_) n += lv.tokens();
  return n;
}

std::size_t PyramidGeometry::level_start(std::size_t l) const {
  if (l > levels_.size()) throw std::out_of_range("level_start: level out of range");
  std::size_t n = 0;
  for (std::size_t k = 0; k < l; ++k) n += levels_[k].tokens();
  return n;
}

void FeaturePyramid::validate(const PyramidGeometry& geom) const {
  if (levels.size() != geom.num_levels()) {
    throw std::invalid_argument(fmt::format(
        "feature pyramid has {} levels, geometry expects {}", levels.size(),
        geom.num_levels()));
  }
  for (std::size_t l = 0; l < levels.size(); ++l) {
    const auto& lv = geom.level(l);
    const Shape want{lv.height, lv.width, geom.channels()};
    if (levels[l].shape() != want) {
      throw std::invalid_argument(fmt::format("feature level {} has shape {}, expected {}",
                                              l, shape_string(levels[l].shape()),
                                              shape_string(want)));
    }
  }
}

PixelCoord token_coordinate(std::size_t level, std::size_t i, std::size_t j,
                            const PyramidGeometry& geom) {
  if (level >= geom.num_levels()) {
    throw std::out_of_range(fmt::format("token_coordinate: level {} of {}", level,
                                        geom.num_levels()));
  }
  const LevelShape& lv = geom.level(level);
  if (i >= lv.width || j >= lv.height) {
    throw std::out_of_range(fmt::format(
        "token_coordinate: ({}, {}) outside {}x{} map at level {}", i, j, lv.width,
        lv.height, level));
  }
  const std::size_t s = lv.stride;
  return {static_cast<double>(s / 2 + i * s), static_cast<double>(s / 2 + j * s)};
}

}  // namespace fdetr::geometry
