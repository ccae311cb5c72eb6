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
#include <filesystem>
#include <vector>

#include "focusdetr/encoder/encoder.hpp"
#include "focusdetr/harness/config.hpp"
#include "focusdetr/harness/selection.hpp"

namespace fdetr::harness {

/// Selection quality of one encoder layer against the scene labels.
struct LayerMetrics {
  double keep_ratio = 0.0;
  std::size_t foreground = 0;
  std::size_t object = 0;
  /// Positives inside the foreground set over all positives.
  double foreground_recall = 0.0;
  /// Positives among the object tokens over the object-token count.
  double object_precision = 0.0;
};

struct PipelineResult {
  /// Enhanced token field [N×C].
  Tensor tokens;
  encoder::EncoderTrace trace;
  /// Selector quality on this scene at the config's eval ratio.
  SelectionMetrics selection;
  std::vector<LayerMetrics> layers;
};

/// Selector scores → cascade selection → dual-attention encoder on one scene.
PipelineResult run_pipeline(const SyntheticScene& scene, const geometry::PyramidGeometry& geom,
                            scoring::FtsParams& fts, encoder::EncoderParams& enc,
                            const encoder::EncoderConfig& config, double eval_ratio);

/// {"levels": [{"level", "stride", "width", "height", "start"}...],
///  "layers": [{"layer", "keep_ratio", "foreground": [...], "object": [...]}...]}
void write_trace_json(const std::filesystem::path& path, const encoder::EncoderTrace& trace,
                      const geometry::PyramidGeometry& geom,
                      const encoder::EncoderConfig& config);

/// Binary PGM per (layer, level), each token drawn as a stride×stride block:
/// 255 object token, 160 other foreground, 0 elsewhere. Files are named
/// layer{n}_level{l}.pgm. Returns the paths written.
std::vector<std::filesystem::path> write_heatmaps(const std::filesystem::path& dir,
                                                  const encoder::EncoderTrace& trace,
                                                  const geometry::PyramidGeometry& geom);

/// Header: layer,keep_ratio,foreground,object,foreground_recall,object_precision
void write_layer_metrics_csv(const std::filesystem::path& path,
                             const std::vector<LayerMetrics>& layers);

/// Header: epoch,loss
void write_loss_csv(const std::filesystem::path& path, const std::vector<double>& losses);

}  // namespace fdetr::harness
