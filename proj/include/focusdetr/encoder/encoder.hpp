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

#include "focusdetr/encoder/attention.hpp"
#include "focusdetr/encoder/workspace.hpp"
#include "focusdetr/scoring/object_score.hpp"

namespace fdetr::encoder {

struct LayerParams {
  MhsaParams self_attn;
  /// LayerNorm after the self-attention residual: gain, shift.
  Parameter norm_gain;
  Parameter norm_shift;
  DeformParams deform;

  static LayerParams init(const EncoderConfig& config, std::size_t levels, std::size_t index,
                          Rng& rng);
  std::vector<Parameter*> parameters();
};

struct EncoderParams {
  std::vector<LayerParams> layers;
  /// Category head shared by every layer.
  scoring::CategoryHead head;

  static EncoderParams init(const EncoderConfig& config, std::size_t levels,
                            std::size_t num_classes, Rng& rng);
  std::vector<Parameter*> parameters();
};

/// Indices touched by one layer, all flat token indices.
struct LayerTrace {
  /// Foreground set, ascending.
  std::vector<std::size_t> foreground;
  /// Object tokens in descending object-score order.
  std::vector<std::size_t> object;
};

struct LayerResult {
  LayerTrace trace;
  /// Deformable attention weights of the foreground queries.
  Var deform_weights;
};

/// One dual-attention layer over the current foreground set:
///   object scores → top-k object tokens → self-attention + residual + norm
///   → scatter into the foreground rows → deformable attention with the
///   foreground rows as queries and the pre-layer field as values
///   → scatter into the token field.
/// Rows outside the foreground set are untouched. k clamps to |foreground|.
LayerResult dual_attention_layer(TokenWorkspace& ws, LayerParams& layer,
                                 scoring::CategoryHead& head, const EncoderConfig& config);

struct EncoderTrace {
  std::vector<LayerTrace> layers;
};

/// Cascade selection followed by a dual-attention layer, config.num_layers
/// times. ws.tokens holds the final field afterwards.
EncoderTrace encoder_forward(TokenWorkspace& ws, EncoderParams& params,
                             const EncoderConfig& config);

}  // namespace fdetr::encoder
