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
#include <vector>

#include "focusdetr/geometry/labels.hpp"
#include "focusdetr/geometry/pyramid.hpp"
#include "focusdetr/numerics/nn.hpp"

namespace fdetr::scoring {

/// Foreground token selector parameters: one MLP shared by every level and
/// one modulation coefficient per non-finest level.
struct FtsParams {
  Mlp mlp_f;
  /// alphas[l - 1] scales level l's scores when modulating level l - 1.
  std::vector<Parameter> alphas;

  /// MLP widths {channels, hidden..., 1} with a sigmoid head; alphas = 1.
  static FtsParams init(std::size_t channels, const std::vector<std::size_t>& hidden,
                        std::size_t num_levels, Activation activation, Rng& rng);

  std::size_t num_levels() const { return alphas.size() + 1; }
  std::vector<Parameter*> parameters();
  void zero_grad();
};

/// Per-level foreground probabilities on a tape, level l shaped [H_l × W_l].
struct ScorePyramid {
  std::vector<Var> levels;

  std::vector<Tensor> values() const;
};

/// f ⊙ (1 + UP(α · S_upper)): every channel of token t in `features`
/// ([H×W × C] for the level below) is scaled by the upsampled score there.
Var modulate_features(const Var& features, const Var& upper_scores, Parameter& alpha,
                      const geometry::LevelShape& target);

/// Top-down scoring:
///   S_L     = MLP_F(f_L)
///   S_{l-1} = MLP_F(f_{l-1} ⊙ (1 + UP(α_l · S_l)))
/// where UP is bilinear upsampling to level l-1 and each token's channels
/// share one modulation factor.
///
/// `features[l]` is level l as [H_l·W_l × C] in row-major token order.
ScorePyramid fts_forward(std::span<const Var> features,
                         const geometry::PyramidGeometry& geom, FtsParams& params);
ScorePyramid fts_forward(Tape& tape, const geometry::FeaturePyramid& pyramid,
                         const geometry::PyramidGeometry& geom, FtsParams& params);

struct FocalConfig {
  double alpha = 0.25;
  double gamma = 2.0;
  double clamp = 1e-7;
};

/// Class-balanced focal loss averaged over every token of every level:
/// label 1 → −α(1−p)^γ·log p, label 0 → −(1−α)·p^γ·log(1−p), with p clamped
/// to [clamp, 1 − clamp].
Var focal_loss(const ScorePyramid& scores, const geometry::LabelPyramid& labels,
               const FocalConfig& config = {});

}  // namespace fdetr::scoring
