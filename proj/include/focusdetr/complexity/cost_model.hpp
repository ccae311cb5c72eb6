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

// Closed-form model FLOP counts for the transformer attention modules. These
// are formula evaluations, never measurements.
namespace fdetr::complexity {

/// Multi-scale deformable attention over n_queries queries:
/// (K·C + 3·M·K + C + 5·K) · N_q · C.
double flops_deformable(double n_queries, double points, double channels, double heads);

/// Dense self-attention over n_queries tokens: 2·N_q·C² + N_q²·C.
double flops_selfattn(double n_queries, double channels);

/// Self-attention enhancement of n_object tokens; same form as
/// flops_selfattn.
double flops_enhancement(double n_object, double channels);

struct CostConfig {
  double points = 4;
  double channels = 256;
  double heads = 8;
  double encoder_tokens = 1e4;
  double decoder_queries = 900;
  /// Encoder keep ratio in (0, 1].
  double keep_ratio = 1.0;
  double object_tokens = 300;
  std::size_t encoder_layers = 6;
  std::size_t decoder_layers = 6;

  void validate() const;
};

/// Per-layer counts plus ratios over layer-weighted totals. With equal
/// encoder and decoder layer counts the ratios equal the per-layer ratios.
struct ComplexityReport {
  CostConfig config;
  /// Deformable attention over keep_ratio·encoder_tokens queries.
  double encoder_deformable = 0;
  /// Deformable cross-attention over the decoder queries.
  double decoder_cross = 0;
  double decoder_self = 0;
  double enhancement = 0;

  /// Encoder over decoder, decoder counted as cross-attention only.
  double ratio_cross_only = 0;
  /// Encoder over decoder, decoder counted as cross- plus self-attention.
  double ratio_with_self = 0;
  /// enhancement / (encoder_deformable + decoder_cross).
  double enhancement_ratio = 0;
  /// Percent drop of encoder + decoder attention cost against keep_ratio = 1,
  /// under each decoder accounting. The enhancement cost is not included.
  double reduction_cross_only = 0;
  double reduction_with_self = 0;
};

ComplexityReport build_report(const CostConfig& config);

}  // namespace fdetr::complexity
