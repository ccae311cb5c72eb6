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

#include "focusdetr/harness/selection.hpp"

#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

#include "focusdetr/encoder/workspace.hpp"
#include "focusdetr/numerics/nn.hpp"

namespace fdetr::harness {

SelectionMetrics evaluate_scores(const std::vector<std::vector<Tensor>>& scores,
                                 const std::vector<geometry::LabelPyramid>& labels,
                                 double ratio) {
  if (scores.size() != labels.size()) {
    throw std::invalid_argument(fmt::format("evaluate_scores: {} score sets for {} label sets",
                                            scores.size(), labels.size()));
  }
  if (!(ratio > 0.0 && ratio <= 1.0)) {
    throw std::invalid_argument(fmt::format("evaluate_scores: ratio {} outside (0, 1]", ratio));
  }
  SelectionMetrics m;
  m.ratio = ratio;
  m.scenes = scores.size();
  std::vector<std::size_t> level_pos, level_hit;
  double pos_sum = 0.0, neg_sum = 0.0, recall_sum = 0.0;
  std::size_t negatives = 0, scored_scenes = 0;
  for (std::size_t s = 0; s < scores.size(); ++s) {
    const auto& sc = scores[s];
    const auto& lb = labels[s].levels;
    if (sc.size() != lb.size()) {
      throw std::invalid_argument(fmt::format("evaluate_scores: scene {} has {} score levels, {} label levels",
                                              s, sc.size(), lb.size()));
    }
    level_pos.resize(std::max(level_pos.size(), sc.size()), 0);
    level_hit.resize(level_pos.size(), 0);
    std::vector<double> flat_scores;
    std::vector<double> flat_labels;
    std::vector<std::size_t> flat_level;
    for (std::size_t l = 0; l < sc.size(); ++l) {
      if (sc[l].shape() != lb[l].shape()) {
        throw std::invalid_argument(fmt::format("evaluate_scores: scene {} level {} shape mismatch", s, l));
      }
      for (std::size_t t = 0; t < sc[l].size(); ++t) {
        flat_scores.push_back(sc[l][t]);
        flat_labels.push_back(lb[l][t]);
        flat_level.push_back(l);
      }
    }
    const std::size_t budget = encoder::keep_count(ratio, flat_scores.size());
    std::vector<bool> kept(flat_scores.size(), false);
    for (std::size_t t : topk_select(flat_scores, budget)) kept[t] = true;
    std::size_t scene_pos = 0, scene_hit = 0;
    for (std::size_t t = 0; t < flat_scores.size(); ++t) {
      if (flat_labels[t] != 0.0) {
        ++scene_pos;
        ++level_pos[flat_level[t]];
        pos_sum += flat_scores[t];
        if (kept[t]) {
          ++scene_hit;
          ++level_hit[flat_level[t]];
        }
      } else {
        ++negatives;
        neg_sum += flat_scores[t];
      }
    }
    m.positives += scene_pos;
    m.kept_positives += scene_hit;
    m.kept += budget;
    if (scene_pos > 0) {
      recall_sum += static_cast<double>(scene_hit) / static_cast<double>(scene_pos);
      ++scored_scenes;
    }
  }
  const auto frac = [](double num, double den) { return den > 0.0 ? num / den : 0.0; };
  m.recall = frac(static_cast<double>(m.kept_positives), static_cast<double>(m.positives));
  m.mean_scene_recall = frac(recall_sum, static_cast<double>(scored_scenes));
  m.precision = frac(static_cast<double>(m.kept_positives), static_cast<double>(m.kept));
  m.mean_positive_score = frac(pos_sum, static_cast<double>(m.positives));
  m.mean_negative_score = frac(neg_sum, static_cast<double>(negatives));
  for (std::size_t l = 0; l < level_pos.size(); ++l) {
    m.level_recall.push_back(frac(static_cast<double>(level_hit[l]), static_cast<double>(level_pos[l])));
  }
  return m;
}

SelectionMetrics evaluate_selection(const std::vector<SyntheticScene>& scenes,
                                    const geometry::PyramidGeometry& geom,
                                    scoring::FtsParams& params, double ratio) {
  std::vector<std::vector<Tensor>> scores;
  std::vector<geometry::LabelPyramid> labels;
  scores.reserve(scenes.size());
  for (const auto& scene : scenes) {
    Tape tape;
    scores.push_back(scoring::fts_forward(tape, scene.features, geom, params).values());
    labels.push_back(scene.labels);
  }
  return evaluate_scores(scores, labels, ratio);
}

void write_metrics_csv(const std::filesystem::path& path, const SelectionMetrics& m) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  out << "ratio,recall,mean_scene_recall,precision,mean_positive_score,mean_negative_score,"
         "positives,kept,kept_positives,scenes";
  for (std::size_t l = 0; l < m.level_recall.size(); ++l) out << fmt::format(",level{}_recall", l);
  out << "\n";
  out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{},{},{},{}", m.ratio,
                     m.recall, m.mean_scene_recall, m.precision, m.mean_positive_score,
                     m.mean_negative_score, m.positives, m.kept, m.kept_positives, m.scenes);
  for (double r : m.level_recall) out << fmt::format(",{:.17g}", r);
  out << "\n";
}

}  // namespace fdetr::harness
