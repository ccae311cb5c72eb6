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

#include "focusdetr/harness/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

namespace fdetr::harness {
namespace {

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = {}) {
  std::ofstream out(path, std::ios::trunc | mode);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  return out;
}

}  // namespace

PipelineResult run_pipeline(const SyntheticScene& scene, const geometry::PyramidGeometry& geom,
                            scoring::FtsParams& fts, encoder::EncoderParams& enc,
                            const encoder::EncoderConfig& config, double eval_ratio) {
  Tape tape;
  const auto scores = scoring::fts_forward(tape, scene.features, geom, fts).values();
  auto ws = encoder::flatten_pyramid(tape, scene.features, scores, geom);

  PipelineResult result;
  result.selection = evaluate_scores({scores}, {scene.labels}, eval_ratio);
  result.trace = encoder::encoder_forward(ws, enc, config);
  result.tokens = ws.tokens.value();

  std::vector<bool> positive;
  for (const auto& level : scene.labels.levels) {
    for (double v : level.data()) positive.push_back(v != 0.0);
  }
  const auto total = static_cast<double>(std::count(positive.begin(), positive.end(), true));
  for (std::size_t l = 0; l < result.trace.layers.size(); ++l) {
    const auto& layer = result.trace.layers[l];
    const auto hits = [&](const std::vector<std::size_t>& idx) {
      return static_cast<double>(
          std::count_if(idx.begin(), idx.end(), [&](std::size_t t) { return positive[t]; }));
    };
    LayerMetrics m;
    m.keep_ratio = config.keep_ratios[l];
    m.foreground = layer.foreground.size();
    m.object = layer.object.size();
    m.foreground_recall = total > 0 ? hits(layer.foreground) / total : 0.0;
    m.object_precision = m.object > 0 ? hits(layer.object) / static_cast<double>(m.object) : 0.0;
    result.layers.push_back(m);
  }
  return result;
}

void write_trace_json(const std::filesystem::path& path, const encoder::EncoderTrace& trace,
                      const geometry::PyramidGeometry& geom,
                      const encoder::EncoderConfig& config) {
  nlohmann::ordered_json j;
  j["levels"] = nlohmann::ordered_json::array();
  for (std::size_t l = 0; l < geom.num_levels(); ++l) {
    const auto& lv = geom.level(l);
    j["levels"].push_back({{"level", l},
                           {"stride", lv.stride},
                           {"width", lv.width},
                           {"height", lv.height},
                           {"start", geom.level_start(l)}});
  }
  j["layers"] = nlohmann::ordered_json::array();
  for (std::size_t n = 0; n < trace.layers.size(); ++n) {
    j["layers"].push_back({{"layer", n},
                           {"keep_ratio", config.keep_ratios.at(n)},
                           {"foreground", trace.layers[n].foreground},
                           {"object", trace.layers[n].object}});
  }
  open_out(path) << j.dump(1) << "\n";
}

std::vector<std::filesystem::path> write_heatmaps(const std::filesystem::path& dir,
                                                  const encoder::EncoderTrace& trace,
                                                  const geometry::PyramidGeometry& geom) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  for (std::size_t n = 0; n < trace.layers.size(); ++n) {
    const std::set<std::size_t> fg(trace.layers[n].foreground.begin(),
                                   trace.layers[n].foreground.end());
    const std::set<std::size_t> obj(trace.layers[n].object.begin(), trace.layers[n].object.end());
    for (std::size_t l = 0; l < geom.num_levels(); ++l) {
      const auto& lv = geom.level(l);
      const std::size_t w = lv.width * lv.stride, h = lv.height * lv.stride;
      std::string pixels(w * h, '\0');
      for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
          const std::size_t t = geom.level_start(l) + (y / lv.stride) * lv.width + x / lv.stride;
          const unsigned char v = obj.count(t) ? 255 : fg.count(t) ? 160 : 0;
          pixels[y * w + x] = static_cast<char>(v);
        }
      }
      const auto path = dir / fmt::format("layer{}_level{}.pgm", n, l);
      auto out = open_out(path, std::ios::binary);
      out << fmt::format("P5\n{} {}\n255\n", w, h);
      out.write(pixels.data(), static_cast<std::streamsize>(pixels.size()));
      written.push_back(path);
    }
  }
  return written;
}

void write_layer_metrics_csv(const std::filesystem::path& path,
                             const std::vector<LayerMetrics>& layers) {
  auto out = open_out(path);
  out << "layer,keep_ratio,foreground,object,foreground_recall,object_precision\n";
  for (std::size_t n = 0; n < layers.size(); ++n) {
    const auto& m = layers[n];
    out << fmt::format("{},{:.17g},{},{},{:.17g},{:.17g}\n", n, m.keep_ratio, m.foreground,
                       m.object, m.foreground_recall, m.object_precision);
  }
}

void write_loss_csv(const std::filesystem::path& path, const std::vector<double>& losses) {
  auto out = open_out(path);
  out << "epoch,loss\n";
  for (std::size_t e = 0; e < losses.size(); ++e) out << fmt::format("{},{:.17g}\n", e, losses[e]);
}

}  // namespace fdetr::harness
