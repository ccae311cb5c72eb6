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

#include "focusdetr/harness/scenes.hpp"
#include "focusdetr/scoring/fts.hpp"

namespace fdetr::harness {

/// Quality of keeping the top ⌈ratio·N⌉ tokens of each scene by score.
struct SelectionMetrics {
  double ratio = 0.0;
  /// Kept positives over all positives, pooled across scenes.
  double recall = 0.0;
  /// Per-scene recall averaged over scenes with at least one positive.
  double mean_scene_recall = 0.0;
  /// Kept positives over all kept tokens.
  double precision = 0.0;
  /// Pooled recall of each level's positives; 0 where a level has none.
  std::vector<double> level_recall;
  double mean_positive_score = 0.0;
  double mean_negative_score = 0.0;
  std::size_t positives = 0;
  std::size_t kept = 0;
  std::size_t kept_positives = 0;
  std::size_t scenes = 0;
};

/// Scores and labels per scene, each a list of per-level [H_l×W_l] maps.
/// Ties in score break toward the lower flat index.
SelectionMetrics evaluate_scores(const std::vector<std::vector<Tensor>>& scores,
                                 const std::vector<geometry::LabelPyramid>& labels,
                                 double ratio);

/// Runs the selector on every scene and scores the top-⌈ratio·N⌉ tokens
/// against the scene labels.
SelectionMetrics evaluate_selection(const std::vector<SyntheticScene>& scenes,
                                    const geometry::PyramidGeometry& geom,
                                    scoring::FtsParams& params, double ratio);

/// One header row, then one data row:
/// ratio,recall,mean_scene_recall,precision,mean_positive_score,
/// mean_negative_score,positives,kept,kept_positives,scenes,level0_recall,...
void write_metrics_csv(const std::filesystem::path& path, const SelectionMetrics& metrics);

}  // namespace fdetr::harness
