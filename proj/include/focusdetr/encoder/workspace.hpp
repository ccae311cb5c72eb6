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

#include "focusdetr/geometry/pyramid.hpp"
#include "focusdetr/numerics/autodiff.hpp"

namespace fdetr::encoder {

struct EncoderConfig {
  std::size_t num_layers = 6;
  std::size_t channels = 256;
  std::size_t heads = 8;
  /// Deformable sampling points per head per level.
  std::size_t points = 4;
  /// Object tokens enhanced by self-attention in each layer.
  std::size_t object_tokens = 300;
  /// Per-layer keep ratios; length num_layers, each in (0, 1], non-increasing.
  std::vector<double> keep_ratios = cascade_schedule();

  /// {0.5, 0.4, 0.3, 0.3, 0.2, 0.1}: six layers averaging 0.3.
  static std::vector<double> cascade_schedule();
  /// Toy defaults: C = 32 and k = 8; other fields as above.
  static EncoderConfig toy();

  void validate() const;
};

/// Flattened multi-scale token field for one scene. Token (l, i, j), with i
/// the column and j the row of level l, has flat index
/// level_start(l) + j·W_l + i.
struct TokenWorkspace {
  geometry::PyramidGeometry geometry;
  /// All tokens T_a, [N×C].
  Var tokens;
  /// Fixed position embeddings, [N×C].
  Tensor pos_embed;
  /// Normalized anchors ((i + 0.5)/W_l, (j + 0.5)/H_l), [N×2].
  Tensor ref_points;
  /// Foreground probabilities of every token from the selector pass, [N].
  /// Fixed for the whole encoder run.
  Tensor scores;
  /// Current foreground index set, sorted ascending and unique.
  std::vector<std::size_t> foreground;
  /// scores restricted to `foreground`, same order.
  Tensor foreground_scores;

  std::size_t num_tokens() const { return geometry.total_tokens(); }
};

struct TokenPosition {
  std::size_t level = 0;
  std::size_t i = 0;
  std::size_t j = 0;

  friend bool operator==(const TokenPosition&, const TokenPosition&) = default;
};

std::size_t flat_index(const geometry::PyramidGeometry& geom, const TokenPosition& pos);
TokenPosition token_position(const geometry::PyramidGeometry& geom, std::size_t flat);

/// 2-D sinusoidal embeddings of normalized anchors, [N×C]. The first C/2
/// channels encode y and the last C/2 encode x as interleaved sin/cos pairs
/// over C/4 geometric frequencies. C must be divisible by 4.
Tensor sinusoidal_embedding(const Tensor& ref_points, std::size_t channels);

/// Level-major flattening of `pyramid` (levels [H_l×W_l×C]) and of the
/// selector's per-level [H_l×W_l] scores. Initially every token is foreground.
TokenWorkspace flatten_pyramid(Tape& tape, const geometry::FeaturePyramid& pyramid,
                               const std::vector<Tensor>& scores,
                               const geometry::PyramidGeometry& geom);

/// Token count kept at `ratio` out of `total`: ⌈ratio·total⌉, at least 1.
std::size_t keep_count(double ratio, std::size_t total);

/// Replaces the foreground set by the top keep_count(keep_ratios[layer], N)
/// tokens of the fixed scores. Fixed scores plus a non-increasing schedule
/// make consecutive sets nested.
void select_foreground(TokenWorkspace& ws, std::size_t layer, const EncoderConfig& config);

}  // namespace fdetr::encoder
