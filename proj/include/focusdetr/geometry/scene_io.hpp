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

#include <filesystem>
#include <string>
#include <vector>

#include "focusdetr/geometry/labels.hpp"
#include "focusdetr/numerics/tensor_io.hpp"

namespace fdetr::geometry {

/// Contents of a `.scene.json` file:
///
///   {"image": {"width": 64, "height": 64},
///    "class_names": ["disc", "square"],
///    "boxes": [{"x": 30, "y": 45, "w": 20, "h": 16, "class": 0}],
///    "features": "scene_0000.features.ftsr"}
///
/// `features` is optional and relative to the scene file's directory.
struct SceneDescription {
  std::size_t image_width = 0;
  std::size_t image_height = 0;
  std::vector<std::string> class_names;
  BoxSet boxes;
  std::string features;
};

std::string scene_to_json(const SceneDescription& scene);
SceneDescription scene_from_json(const std::string& text);

void write_scene(const std::filesystem::path& path, const SceneDescription& scene);
SceneDescription read_scene(const std::filesystem::path& path);

/// One tensor per level, named "level0", "level1", ...
std::vector<NamedTensor> levels_to_named(const std::vector<Tensor>& levels);
std::vector<Tensor> levels_from_named(const std::vector<NamedTensor>& named);

}  // namespace fdetr::geometry
