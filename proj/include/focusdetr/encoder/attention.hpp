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
#include <string>
#include <vector>

#include "focusdetr/geometry/pyramid.hpp"
#include "focusdetr/numerics/nn.hpp"

namespace fdetr::encoder {

/// Multi-head self-attention projections, all [C×C] weights with length-C
/// biases, ordered q, k, v, out.
struct MhsaParams {
  std::vector<Parameter> params;

  static MhsaParams init(std::size_t channels, Rng& rng, const std::string& prefix);
  Parameter& weight(std::size_t which) { return params[2 * which]; }
  Parameter& bias(std::size_t which) { return params[2 * which + 1]; }
};

/// Scaled dot-product attention over M heads of width C/M, scale
/// 1/sqrt(C/M), followed by the output projection. Inputs are [n×C].
Var mhsa(const Var& query, const Var& key, const Var& value, MhsaParams& params,
         std::size_t heads);

/// Deformable attention projections: value [C×C], sampling offsets
/// [C × M·L·K·2], attention logits [C × M·L·K], output [C×C].
struct DeformParams {
  std::size_t heads = 0;
  std::size_t levels = 0;
  std::size_t points = 0;
  std::vector<Parameter> params;

  /// Offset and logit weights start at zero: weights are uniform and head h
  /// places point p at (p + 1)·(direction 2πh/M) pixels from the reference.
  static DeformParams init(std::size_t channels, std::size_t heads, std::size_t levels,
                           std::size_t points, Rng& rng, const std::string& prefix);
  Parameter& weight(std::size_t which) { return params[2 * which]; }
  Parameter& bias(std::size_t which) { return params[2 * which + 1]; }

  static constexpr std::size_t kValue = 0;
  static constexpr std::size_t kOffset = 1;
  static constexpr std::size_t kLogit = 2;
  static constexpr std::size_t kOutput = 3;
};

/// Sampling core. For query q, head h, level l and point p the location is
///   ref[q] + offsets[q, ((h·L + l)·K + p)·2 + {0,1}] / (W_l, H_l)
/// and out[q, h·D:(h+1)·D] = Σ_{l,p} weights[q, (h·L + l)·K + p] ·
/// bilinear(value level l, head h channels, location).
///
/// `value` is the level-major token field [N×C] of `geom`; `ref_points` is
/// a constant [Nq×2]. Differentiable in value, offsets and weights.
Var msda_core(const Var& value, const geometry::PyramidGeometry& geom,
              const Tensor& ref_points, const Var& offsets, const Var& weights,
              std::size_t heads, std::size_t points);

struct DeformOutput {
  Var output;
  /// Softmax-normalized weights [Nq × M·L·K]; each (query, head) block of
  /// L·K entries sums to 1.
  Var weights;
};

/// Multi-scale deformable attention of `queries` [Nq×C] at `ref_points`
/// [Nq×2] into the token field `value_tokens` [N×C]. Weights are normalized
/// jointly over all levels and points of a head.
DeformOutput ms_deform_attn(const Var& queries, const Tensor& ref_points,
                            const Var& value_tokens, const geometry::PyramidGeometry& geom,
                            DeformParams& params);

}  // namespace fdetr::encoder
