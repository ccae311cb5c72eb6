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

#include "focusdetr/complexity/cost_model.hpp"

#include <stdexcept>

#include <fmt/format.h>

namespace fdetr::complexity {
namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) throw std::invalid_argument(fmt::format("{} must be positive, got {}", name, v));
}

}  // namespace

double flops_deformable(double n_queries, double points, double channels, double heads) {
  require_positive(n_queries, "n_queries");
  require_positive(points, "points");
  require_positive(channels, "channels");
  require_positive(heads, "heads");
  return (points * channels + 3.0 * heads * points + channels + 5.0 * points) * n_queries *
         channels;
}

double flops_selfattn(double n_queries, double channels) {
  require_positive(n_queries, "n_queries");
  require_positive(channels, "channels");
  return 2.0 * n_queries * channels * channels + n_queries * n_queries * channels;
}

double flops_enhancement(double n_object, double channels) {
  return flops_selfattn(n_object, channels);
}

void CostConfig::validate() const {
  require_positive(points, "points");
  require_positive(channels, "channels");
  require_positive(heads, "heads");
  require_positive(encoder_tokens, "encoder_tokens");
  require_positive(decoder_queries, "decoder_queries");
  require_positive(object_tokens, "object_tokens");
  if (!(keep_ratio > 0.0 && keep_ratio <= 1.0)) {
    throw std::invalid_argument(fmt::format("keep_ratio {} outside (0, 1]", keep_ratio));
  }
  if (encoder_layers == 0 || decoder_layers == 0) {
    throw std::invalid_argument("layer counts must be positive");
  }
}

ComplexityReport build_report(const CostConfig& config) {
  config.validate();
  const auto& c = config;
  ComplexityReport r;
  r.config = c;
  r.encoder_deformable =
      flops_deformable(c.keep_ratio * c.encoder_tokens, c.points, c.channels, c.heads);
  r.decoder_cross = flops_deformable(c.decoder_queries, c.points, c.channels, c.heads);
  r.decoder_self = flops_selfattn(c.decoder_queries, c.channels);
  r.enhancement = flops_enhancement(c.object_tokens, c.channels);

  const double le = static_cast<double>(c.encoder_layers);
  const double ld = static_cast<double>(c.decoder_layers);
  const double enc = le * r.encoder_deformable;
  const double cross = ld * r.decoder_cross;
  const double both = ld * (r.decoder_cross + r.decoder_self);
  r.ratio_cross_only = enc / cross;
  r.ratio_with_self = enc / both;
  r.enhancement_ratio = le * r.enhancement / (enc + cross);

  const double dense_enc =
      le * flops_deformable(c.encoder_tokens, c.points, c.channels, c.heads);
  r.reduction_cross_only = 100.0 * (1.0 - (enc + cross) / (dense_enc + cross));
  r.reduction_with_self = 100.0 * (1.0 - (enc + both) / (dense_enc + both));
  return r;
}

}  // namespace fdetr::complexity
