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
#include <span>
#include <vector>

#include "focusdetr/numerics/autodiff.hpp"

// Differentiable tensor operations. Every op records itself on the tape that
// owns its first input; all inputs must share that tape.
namespace fdetr::ops {

Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);
Var scale(const Var& a, double factor);
Var add_scalar(const Var& a, double offset);
/// a * s for a one-element Var `s`.
Var mul_by_scalar(const Var& a, const Var& s);

/// [N×D]·[D×M] → [N×M].
Var matmul(const Var& a, const Var& b);
/// Adds a length-M bias to every row of [N×M].
Var add_row(const Var& a, const Var& bias);
Var transpose(const Var& a);
Var reshape(const Var& a, Shape shape);

Var sigmoid(const Var& a);
Var relu(const Var& a);
/// Exact (erf) GELU.
Var gelu(const Var& a);
Var log(const Var& a);

/// Softmax along `axis`, max-subtracted.
Var softmax(const Var& a, std::size_t axis);

/// out[n][c] = a[n][c] * factor[n] for a:[N×C], factor:[N].
Var row_scale(const Var& a, const Var& factor);
/// Per-row maximum of [N×K] → [N]; gradient goes to the first maximal entry.
Var row_max(const Var& a);

/// Rows `index` of a rank-1 or rank-2 tensor.
Var gather_rows(const Var& a, std::span<const std::size_t> index);
/// Copy of `base` with rows `index` replaced by `rows`. Indices must be unique.
Var scatter_rows(const Var& base, std::span<const std::size_t> index,
                 const Var& rows);

/// Columns [start, start + count) of a 2-D tensor.
Var slice_cols(const Var& a, std::size_t start, std::size_t count);
Var concat_cols(std::span<const Var> parts);

Var sum(const Var& a);
Var mean(const Var& a);
/// Σ a·w for a constant weight tensor of the same size.
Var weighted_sum(const Var& a, const Tensor& weights);

/// Align-corners-false bilinear resize of [H×W] up to [H2×W2].
Var bilinear_upsample(const Var& a, std::size_t out_h, std::size_t out_w);

/// Samples [H×W×C] at P normalized points ([P×2] as (x, y) in [0,1]) with
/// pixel centers at (i + 0.5) / W. Coordinates clamp to the border.
/// Differentiable in both the map and the points.
Var bilinear_sample(const Var& map, const Var& points);

}  // namespace fdetr::ops
