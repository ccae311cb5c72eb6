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

#include "focusdetr/encoder/workspace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "focusdetr/numerics/nn.hpp"

namespace fdetr::encoder {

std::vector<double> EncoderConfig::cascade_schedule() { return {0.5, 0.4, 0.3, 0.3, 0.2, 0.1}; }

EncoderConfig EncoderConfig::toy() {
  EncoderConfig c;
  c.channels = 32;
  c.object_tokens = 8;
  return c;
}

void EncoderConfig::validate() const {
  if (channels == 0 || heads == 0 || channels % heads != 0) {
    throw std::invalid_argument(
        fmt::format("EncoderConfig: {} channels not divisible by {} heads", channels, heads));
  }
  if (points == 0) throw std::invalid_argument("EncoderConfig: points must be positive");
  if (object_tokens == 0) throw std::invalid_argument("EncoderConfig: object_tokens must be positive");
  if (keep_ratios.size() != num_layers) {
    throw std::invalid_argument(fmt::format("EncoderConfig: {} keep ratios for {} layers",
                                            keep_ratios.size(), num_layers));
  }
  for (std::size_t i = 0; i < keep_ratios.size(); ++i) {
    const double r = keep_ratios[i];
    if (!(r > 0.0 && r <= 1.0)) {
      throw std::invalid_argument(fmt::format("EncoderConfig: keep ratio {} outside (0, 1]", r));
    }
    if (i > 0 && r > keep_ratios[i - 1]) {
      throw std::invalid_argument("EncoderConfig: keep ratios must be non-increasing");
    }
  }
}

std::size_t flat_index(const geometry::PyramidGeometry& geom, const TokenPosition& pos) {
  const auto& lv = geom.level(pos.level);
  if (pos.i >= lv.width || pos.j >= lv.height) {
    throw std::out_of_range(fmt::format("flat_index: ({}, {}) outside level {} of {}×{}", pos.i,
                                        pos.j, pos.level, lv.width, lv.height));
  }
  return geom.level_start(pos.level) + pos.j * lv.width + pos.i;
}

TokenPosition token_position(const geometry::PyramidGeometry& geom, std::size_t flat) {
  for (std::size_t l = 0; l < geom.num_levels(); ++l) {
    const std::size_t start = geom.level_start(l);
    const auto& lv = geom.level(l);
    if (flat < start + lv.tokens()) {
      const std::size_t local = flat - start;
      return {l, local % lv.width, local / lv.width};
    }
  }
  throw std::out_of_range(fmt::format("token_position: {} outside {} tokens", flat,
                                      geom.total_tokens()));
}

Tensor sinusoidal_embedding(const Tensor& ref_points, std::size_t channels) {
  if (channels == 0 || channels % 4 != 0) {
    throw std::invalid_argument(
        fmt::format("sinusoidal_embedding: channels {} not divisible by 4", channels));
  }
  const std::size_t n = ref_points.dim(0);
  const std::size_t quarter = channels / 4;
  const std::size_t half = channels / 2;
  Tensor pe({n, channels});
  for (std::size_t t = 0; t < n; ++t) {
    const double x = ref_points.at(t, 0), y = ref_points.at(t, 1);
    double* row = pe.data().data() + t * channels;
    for (std::size_t f = 0; f < quarter; ++f) {
      const double freq = 2.0 * std::numbers::pi *
                          std::pow(10000.0, -static_cast<double>(f) / static_cast<double>(quarter));
      row[2 * f] = std::sin(y * freq);
      row[2 * f + 1] = std::cos(y * freq);
      row[half + 2 * f] = std::sin(x * freq);
      row[half + 2 * f + 1] = std::cos(x * freq);
    }
  }
  return pe;
}

TokenWorkspace flatten_pyramid(Tape& tape, const geometry::FeaturePyramid& pyramid,
                               const std::vector<Tensor>& scores,
                               const geometry::PyramidGeometry& geom) {
  pyramid.validate(geom);
  if (scores.size() != geom.num_levels()) {
    throw std::invalid_argument(fmt::format("flatten_pyramid: {} score levels for {} levels",
                                            scores.size(), geom.num_levels()));
  }
  const std::size_t n = geom.total_tokens(), c = geom.channels();
  Tensor tokens({n, c});
  Tensor ref({n, 2});
  Tensor flat_scores({n});
  for (std::size_t l = 0; l < geom.num_levels(); ++l) {
    const auto& lv = geom.level(l);
    if (scores[l].shape() != Shape{lv.height, lv.width}) {
      throw std::invalid_argument(fmt::format("flatten_pyramid: level {} scores {} expected {}",
                                              l, shape_string(scores[l].shape()),
                                              shape_string({lv.height, lv.width})));
    }
    const std::size_t start = geom.level_start(l);
    std::copy(pyramid.levels[l].data().begin(), pyramid.levels[l].data().end(),
              tokens.data().begin() + start * c);
    for (std::size_t j = 0; j < lv.height; ++j) {
      for (std::size_t i = 0; i < lv.width; ++i) {
        const std::size_t t = start + j * lv.width + i;
        ref.at(t, 0) = (static_cast<double>(i) + 0.5) / static_cast<double>(lv.width);
        ref.at(t, 1) = (static_cast<double>(j) + 0.5) / static_cast<double>(lv.height);
        flat_scores[t] = scores[l].at(j, i);
      }
    }
  }
  TokenWorkspace ws{geom, tape.constant(std::move(tokens)), sinusoidal_embedding(ref, c), ref,
                    flat_scores, {}, flat_scores};
  ws.foreground.resize(n);
  for (std::size_t t = 0; t < n; ++t) ws.foreground[t] = t;
  return ws;
}

std::size_t keep_count(double ratio, std::size_t total) {
  // The slack absorbs products such as 0.3·10 = 3.0000000000000004.
  const double raw = std::ceil(ratio * static_cast<double>(total) - 1e-9);
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(raw, 1.0)), 1, total);
}

void select_foreground(TokenWorkspace& ws, std::size_t layer, const EncoderConfig& config) {
  if (layer >= config.keep_ratios.size()) {
    throw std::out_of_range(fmt::format("select_foreground: layer {} of {}", layer,
                                        config.keep_ratios.size()));
  }
  const std::size_t keep = keep_count(config.keep_ratios[layer], ws.num_tokens());
  ws.foreground = topk_select(ws.scores.data(), keep);
  std::sort(ws.foreground.begin(), ws.foreground.end());
  Tensor fg({ws.foreground.size()});
  for (std::size_t i = 0; i < ws.foreground.size(); ++i) fg[i] = ws.scores[ws.foreground[i]];
  ws.foreground_scores = std::move(fg);
}

}  // namespace fdetr::encoder
