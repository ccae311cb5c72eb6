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
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "focusdetr/geometry/labels.hpp"
#include "focusdetr/geometry/pyramid.hpp"
#include "focusdetr/numerics/random.hpp"

namespace fdetr::harness {

/// Recipe for a family of synthetic scenes. (spec, seed) fixes every scene,
/// and scene i does not depend on how many scenes are drawn.
struct SceneSpec {
  std::size_t image_width = 192;
  std::size_t image_height = 192;
  std::vector<std::size_t> strides{8, 16, 32, 64};
  std::size_t channels = 32;
  std::size_t num_classes = 2;
  std::size_t min_boxes = 1;
  std::size_t max_boxes = 3;
  /// Box half-scales max(w, h)/2 are log-uniform over [min_scale, max_scale].
  double min_scale = 4.0;
  double max_scale = 900.0;
  /// Short side over long side, uniform in [min_aspect, 1].
  double min_aspect = 0.5;
  double noise_std = 0.3;
  std::vector<geometry::ScaleInterval> intervals =
      geometry::ScaleIntervals::overlapping_default().intervals();
  /// Draws boxes and noise.
  std::uint64_t seed = 0;
  /// Draws the class patterns. Datasets that must share a feature model
  /// (training and held-out sets) share this and differ in `seed`.
  std::uint64_t pattern_seed = 0;

  void validate() const;
  geometry::PyramidGeometry geometry() const;
  geometry::ScaleIntervals scale_intervals() const { return geometry::ScaleIntervals(intervals); }

  nlohmann::json to_json() const;
  static SceneSpec from_json(const nlohmann::json& j);
};

struct SyntheticScene {
  geometry::BoxSet boxes;
  /// Level l is [H_l×W_l×C].
  geometry::FeaturePyramid features;
  geometry::LabelPyramid labels;
};

/// Unit-RMS signature vector of each class, [num_classes × C], fixed by
/// pattern_seed and shared by every scene and level.
Tensor class_patterns(const SceneSpec& spec);

/// Boxes for scene `index`: centers uniform over the image, so no box lies
/// fully outside it.
geometry::BoxSet sample_boxes(const SceneSpec& spec, std::size_t index);

/// Features of one level: each box whose scale fits the level's interval adds
/// its class pattern times a flat-top blob (1 at anchors inside the box,
/// Gaussian falloff with σ = stride/2 outside), plus N(0, noise_std²) noise.
Tensor render_level(const SceneSpec& spec, const geometry::BoxSet& boxes, std::size_t level,
                    const Tensor& patterns, Rng& noise);

SyntheticScene make_scene(const SceneSpec& spec, std::size_t index);
std::vector<SyntheticScene> generate_scenes(const SceneSpec& spec, std::size_t n);

/// Writes dataset.json (the spec and scene count) and, per scene,
/// scene_XXXX.scene.json plus scene_XXXX.features.ftsr.
void write_dataset(const std::filesystem::path& dir, const SceneSpec& spec,
                   const std::vector<SyntheticScene>& scenes);

struct Dataset {
  SceneSpec spec;
  std::vector<SyntheticScene> scenes;
};

/// Reads a directory written by write_dataset. Labels are reassigned from the
/// stored boxes.
Dataset read_dataset(const std::filesystem::path& dir);
/// Reads one scene file; `spec` supplies geometry and intervals.
SyntheticScene read_scene_file(const std::filesystem::path& path, const SceneSpec& spec);

}  // namespace fdetr::harness
