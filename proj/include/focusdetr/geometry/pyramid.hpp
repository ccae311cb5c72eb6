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
#include <utility>
#include <vector>

#include "focusdetr/numerics/tensor.hpp"

namespace fdetr::geometry {

struct LevelShape {
  std::size_t stride = 0;
  std::size_t width = 0;   // W_l = ceil(image_width / stride)
  std::size_t height = 0;  // H_l = ceil(image_height / stride)

  std::size_t tokens() const { return width * height; }
  friend bool operator==(const LevelShape&, const LevelShape&) = default;
};

/// Geometry of a multi-scale feature pyramid over an image.
class PyramidGeometry {
 public:
  static constexpr std::size_t kDefaultStrides[] = {8, 16, 32, 64};

  PyramidGeometry(std::size_t image_width, std::size_t image_height,
                  std::vector<std::size_t> strides, std::size_t channels);
  /// Strides {8, 16, 32, 64}.
  PyramidGeometry(std::size_t image_width, std::size_t image_height,
                  std::size_t channels);

  std::size_t image_width() const { return image_width_; }
  std::size_t image_height() const { return image_height_; }
  std::size_t channels() const { return channels_; }
  std::size_t num_levels() const { return levels_.size(); }
  const LevelShape& level(std::size_t l) const { return levels_.at(l); }
  const std::vector<LevelShape>& levels() const { return levels_; }

  /// Σ_l H_l·W_l.
  std::size_t total_tokens() const;
  /// Flat index of the first token of level l in level-major order.
  std::size_t level_start(std::size_t l) const;

  friend bool operator==(const PyramidGeometry&, const PyramidGeometry&) = default;

 private:
  std::size_t image_width_;
  std::size_t image_height_;
  std::size_t channels_;
  std::vector<LevelShape> levels_;
};

/// Dense per-level features, level l shaped [H_l × W_l × C].
struct FeaturePyramid {
  std::vector<Tensor> levels;

  /// Throws unless every level matches `geom`.
  void validate(const PyramidGeometry& geom) const;
};

struct PixelCoord {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

/// Image-space anchor of token (i = column, j = row) on `level`:
/// (⌊s/2⌋ + i·s, ⌊s/2⌋ + j·s).
PixelCoord token_coordinate(std::size_t level, std::size_t i, std::size_t j,
                            const PyramidGeometry& geom);

}  // namespace fdetr::geometry
