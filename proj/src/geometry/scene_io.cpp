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

#include "focusdetr/geometry/scene_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

namespace fdetr::geometry {

std::string scene_to_json(const SceneDescription& scene) {
  nlohmann::ordered_json j;
  j["image"] = {{"width", scene.image_width}, {"height", scene.image_height}};
  j["class_names"] = scene.class_names;
  j["boxes"] = nlohmann::ordered_json::array();
  for (const Box& b : scene.boxes.boxes) {
    j["boxes"].push_back(
        {{"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h}, {"class", b.cls}});
  }
  if (!scene.features.empty()) j["features"] = scene.features;
  return j.dump(2) + "\n";
}

SceneDescription scene_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  SceneDescription scene;
  scene.image_width = j.at("image").at("width").get<std::size_t>();
  scene.image_height = j.at("image").at("height").get<std::size_t>();
  scene.class_names = j.at("class_names").get<std::vector<std::string>>();
  for (const auto& b : j.at("boxes")) {
    scene.boxes.boxes.push_back({b.at("x").get<double>(), b.at("y").get<double>(),
                                 b.at("w").get<double>(), b.at("h").get<double>(),
                                 b.at("class").get<std::size_t>()});
  }
  scene.boxes.validate(scene.class_names.size());
  scene.features = j.value("features", "");
  return scene;
}

void write_scene(const std::filesystem::path& path, const SceneDescription& scene) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  file << scene_to_json(scene);
}

SceneDescription read_scene(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error(fmt::format("cannot read {}", path.string()));
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return scene_from_json(buffer.str());
}

std::vector<NamedTensor> levels_to_named(const std::vector<Tensor>& levels) {
  std::vector<NamedTensor> out;
  for (std::size_t l = 0; l < levels.size(); ++l) {
    out.push_back({fmt::format("level{}", l), levels[l]});
  }
  return out;
}

std::vector<Tensor> levels_from_named(const std::vector<NamedTensor>& named) {
  std::vector<Tensor> out;
  for (std::size_t l = 0; l < named.size(); ++l) {
    if (named[l].name != fmt::format("level{}", l)) {
      throw std::runtime_error(fmt::format("expected tensor 'level{}', found '{}'", l,
                                           named[l].name));
    }
    out.push_back(named[l].tensor);
  }
  return out;
}

}  // namespace fdetr::geometry
