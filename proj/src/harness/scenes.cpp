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

#include "focusdetr/harness/scenes.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "focusdetr/geometry/scene_io.hpp"
#include "focusdetr/numerics/tensor_io.hpp"

namespace fdetr::harness {
namespace {

// Stream ids keep the pattern, box and noise draws of a scene independent.
constexpr std::uint64_t kPatternStream = 0x5041545445524eULL;
constexpr std::uint64_t kBoxStream = 1;
constexpr std::uint64_t kNoiseStream = 2;

Rng scene_rng(const SceneSpec& spec, std::size_t index, std::uint64_t stream) {
  return Rng(spec.seed).fork(index + 1).fork(stream);
}

std::string scene_stem(std::size_t i) { return fmt::format("scene_{:04d}", i); }

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open {}", path.string()));
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

void SceneSpec::validate() const {
  if (image_width == 0 || image_height == 0) throw std::invalid_argument("SceneSpec: empty image");
  if (channels == 0 || num_classes == 0) {
    throw std::invalid_argument("SceneSpec: channels and num_classes must be positive");
  }
  if (min_boxes > max_boxes) {
    throw std::invalid_argument(
        fmt::format("SceneSpec: box count range ({}, {}) is inverted", min_boxes, max_boxes));
  }
  if (!(min_scale > 0.0 && min_scale <= max_scale)) {
    throw std::invalid_argument(
        fmt::format("SceneSpec: scale range [{}, {}] invalid", min_scale, max_scale));
  }
  if (!(min_aspect > 0.0 && min_aspect <= 1.0)) {
    throw std::invalid_argument(fmt::format("SceneSpec: min_aspect {} outside (0, 1]", min_aspect));
  }
  if (!(noise_std >= 0.0)) throw std::invalid_argument("SceneSpec: noise_std must be >= 0");
  if (intervals.size() != strides.size()) {
    throw std::invalid_argument(fmt::format("SceneSpec: {} intervals for {} levels",
                                            intervals.size(), strides.size()));
  }
  scale_intervals();
  geometry();
}

geometry::PyramidGeometry SceneSpec::geometry() const {
  return geometry::PyramidGeometry(image_width, image_height, strides, channels);
}

nlohmann::json SceneSpec::to_json() const {
  nlohmann::json iv = nlohmann::json::array();
  for (const auto& i : intervals) iv.push_back({i.begin, i.end});
  return {{"image", {{"width", image_width}, {"height", image_height}}},
          {"strides", strides},
          {"channels", channels},
          {"num_classes", num_classes},
          {"boxes", {{"min", min_boxes}, {"max", max_boxes}}},
          {"scale", {{"min", min_scale}, {"max", max_scale}}},
          {"min_aspect", min_aspect},
          {"noise_std", noise_std},
          {"intervals", iv},
          {"seed", seed},
          {"pattern_seed", pattern_seed}};
}

SceneSpec SceneSpec::from_json(const nlohmann::json& j) {
  SceneSpec s;
  if (j.contains("image")) {
    s.image_width = j["image"].value("width", s.image_width);
    s.image_height = j["image"].value("height", s.image_height);
  }
  s.strides = j.value("strides", s.strides);
  s.channels = j.value("channels", s.channels);
  s.num_classes = j.value("num_classes", s.num_classes);
  if (j.contains("boxes")) {
    s.min_boxes = j["boxes"].value("min", s.min_boxes);
    s.max_boxes = j["boxes"].value("max", s.max_boxes);
  }
  if (j.contains("scale")) {
    s.min_scale = j["scale"].value("min", s.min_scale);
    s.max_scale = j["scale"].value("max", s.max_scale);
  }
  s.min_aspect = j.value("min_aspect", s.min_aspect);
  s.noise_std = j.value("noise_std", s.noise_std);
  if (j.contains("intervals")) {
    s.intervals.clear();
    for (const auto& p : j["intervals"]) {
      s.intervals.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    }
  }
  s.seed = j.value("seed", s.seed);
  s.pattern_seed = j.value("pattern_seed", s.pattern_seed);
  s.validate();
  return s;
}

Tensor class_patterns(const SceneSpec& spec) {
  Rng rng = Rng(spec.pattern_seed).fork(kPatternStream);
  Tensor p({spec.num_classes, spec.channels});
  for (std::size_t k = 0; k < spec.num_classes; ++k) {
    double norm2 = 0.0;
    for (std::size_t c = 0; c < spec.channels; ++c) {
      p.at(k, c) = rng.normal();
      norm2 += p.at(k, c) * p.at(k, c);
    }
    const double scale = std::sqrt(static_cast<double>(spec.channels) / norm2);
    for (std::size_t c = 0; c < spec.channels; ++c) p.at(k, c) *= scale;
  }
  return p;
}

geometry::BoxSet sample_boxes(const SceneSpec& spec, std::size_t index) {
  Rng rng = scene_rng(spec, index, kBoxStream);
  const auto count = static_cast<std::size_t>(rng.uniform_int(
      static_cast<std::int64_t>(spec.min_boxes), static_cast<std::int64_t>(spec.max_boxes)));
  geometry::BoxSet set;
  const double log_lo = std::log(spec.min_scale), log_hi = std::log(spec.max_scale);
  for (std::size_t b = 0; b < count; ++b) {
    const double half = std::exp(rng.uniform(log_lo, log_hi));
    const double aspect = rng.uniform(spec.min_aspect, 1.0);
    double w = 2.0 * half, h = 2.0 * half * aspect;
    if (rng.uniform() < 0.5) std::swap(w, h);
    geometry::Box box;
    box.x = rng.uniform(0.0, static_cast<double>(spec.image_width));
    box.y = rng.uniform(0.0, static_cast<double>(spec.image_height));
    box.w = w;
    box.h = h;
    box.cls = static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(spec.num_classes) - 1));
    set.boxes.push_back(box);
  }
  return set;
}

Tensor render_level(const SceneSpec& spec, const geometry::BoxSet& boxes, std::size_t level,
                    const Tensor& patterns, Rng& noise) {
  const auto geom = spec.geometry();
  const auto intervals = spec.scale_intervals();
  const auto& lv = geom.level(level);
  const std::size_t c = spec.channels;
  const double sigma = static_cast<double>(lv.stride) / 2.0;
  Tensor out({lv.height, lv.width, c});
  for (std::size_t j = 0; j < lv.height; ++j) {
    for (std::size_t i = 0; i < lv.width; ++i) {
      const auto anchor = geometry::token_coordinate(level, i, j, geom);
      double* row = out.data().data() + (j * lv.width + i) * c;
      for (const auto& box : boxes.boxes) {
        if (!intervals[level].contains(geometry::box_scale(box))) continue;
        // Distance from the anchor to the box extent; zero inside.
        const double dx = std::max(0.0, std::abs(anchor.x - box.x) - box.w / 2.0);
        const double dy = std::max(0.0, std::abs(anchor.y - box.y) - box.h / 2.0);
        const double amp = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
        for (std::size_t ch = 0; ch < c; ++ch) row[ch] += amp * patterns.at(box.cls, ch);
      }
      for (std::size_t ch = 0; ch < c; ++ch) row[ch] += spec.noise_std * noise.normal();
    }
  }
  return out;
}

SyntheticScene make_scene(const SceneSpec& spec, std::size_t index) {
  const auto geom = spec.geometry();
  const Tensor patterns = class_patterns(spec);
  SyntheticScene scene;
  scene.boxes = sample_boxes(spec, index);
  Rng noise = scene_rng(spec, index, kNoiseStream);
  for (std::size_t l = 0; l < geom.num_levels(); ++l) {
    scene.features.levels.push_back(render_level(spec, scene.boxes, l, patterns, noise));
  }
  scene.labels = geometry::assign_labels(scene.boxes, geom, spec.scale_intervals());
  return scene;
}

std::vector<SyntheticScene> generate_scenes(const SceneSpec& spec, std::size_t n) {
  if (n < 1) throw std::invalid_argument("generate_scenes: n must be at least 1");
  spec.validate();
  std::vector<SyntheticScene> scenes;
  scenes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) scenes.push_back(make_scene(spec, i));
  return scenes;
}

void write_dataset(const std::filesystem::path& dir, const SceneSpec& spec,
                   const std::vector<SyntheticScene>& scenes) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "dataset.json", std::ios::trunc);
    if (!out) throw std::runtime_error(fmt::format("cannot write {}", (dir / "dataset.json").string()));
    out << nlohmann::json{{"spec", spec.to_json()}, {"scenes", scenes.size()}}.dump(2) << "\n";
  }
  std::vector<std::string> class_names;
  for (std::size_t k = 0; k < spec.num_classes; ++k) class_names.push_back(fmt::format("class{}", k));
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    const std::string stem = scene_stem(i);
    geometry::SceneDescription desc{spec.image_width, spec.image_height, class_names,
                                    scenes[i].boxes, stem + ".features.ftsr"};
    write_ftsr(dir / desc.features, geometry::levels_to_named(scenes[i].features.levels));
    geometry::write_scene(dir / (stem + ".scene.json"), desc);
  }
}

SyntheticScene read_scene_file(const std::filesystem::path& path, const SceneSpec& spec) {
  const auto desc = geometry::read_scene(path);
  if (desc.image_width != spec.image_width || desc.image_height != spec.image_height) {
    throw std::runtime_error(fmt::format("{}: image {}x{} does not match spec {}x{}",
                                         path.string(), desc.image_width, desc.image_height,
                                         spec.image_width, spec.image_height));
  }
  if (desc.features.empty()) {
    throw std::runtime_error(fmt::format("{}: no features file", path.string()));
  }
  const auto geom = spec.geometry();
  SyntheticScene scene;
  scene.boxes = desc.boxes;
  scene.boxes.validate(spec.num_classes);
  scene.features.levels =
      geometry::levels_from_named(read_ftsr(path.parent_path() / desc.features));
  scene.features.validate(geom);
  scene.labels = geometry::assign_labels(scene.boxes, geom, spec.scale_intervals());
  return scene;
}

Dataset read_dataset(const std::filesystem::path& dir) {
  const auto meta = nlohmann::json::parse(read_text(dir / "dataset.json"));
  Dataset ds;
  ds.spec = SceneSpec::from_json(meta.at("spec"));
  const auto n = meta.at("scenes").get<std::size_t>();
  for (std::size_t i = 0; i < n; ++i) {
    ds.scenes.push_back(read_scene_file(dir / (scene_stem(i) + ".scene.json"), ds.spec));
  }
  return ds;
}

}  // namespace fdetr::harness
