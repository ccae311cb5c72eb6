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

#include "focusdetr/scoring/fts.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "focusdetr/numerics/ops.hpp"

namespace fdetr::scoring {

FtsParams FtsParams::init(std::size_t channels, const std::vector<std::size_t>& hidden,
                          std::size_t num_levels, Activation activation, Rng& rng) {
  if (num_levels < 2) throw std::invalid_argument("FtsParams: need at least 2 levels");
  MlpSpec spec;
  spec.widths.push_back(channels);
  spec.widths.insert(spec.widths.end(), hidden.begin(), hidden.end());
  spec.widths.push_back(1);
  spec.activation = activation;
  spec.final_activation = FinalActivation::kSigmoid;
  FtsParams p;
  p.mlp_f = Mlp::init(std::move(spec), rng, "fts.mlp");
  for (std::size_t l = 1; l < num_levels; ++l) {
    p.alphas.emplace_back(fmt::format("fts.alpha{}", l), Tensor::scalar(1.0));
  }
  return p;
}

std::vector<Parameter*> FtsParams::parameters() {
  std::vector<Parameter*> out;
  for (auto& p : mlp_f.params) out.push_back(&p);
  for (auto& a : alphas) out.push_back(&a);
  return out;
}

void FtsParams::zero_grad() {
  for (Parameter* p : parameters()) p->zero_grad();
}

std::vector<Tensor> ScorePyramid::values() const {
  std::vector<Tensor> out;
  out.reserve(levels.size());
  for (const Var& v : levels) out.push_back(v.value());
  return out;
}

Var modulate_features(const Var& features, const Var& upper_scores, Parameter& alpha,
                      const geometry::LevelShape& target) {
  Tape& tape = features.tape();
  Var scaled = ops::mul_by_scalar(upper_scores, tape.param(alpha));
  Var up = ops::bilinear_upsample(scaled, target.height, target.width);
  Var factor = ops::add_scalar(ops::reshape(up, {target.tokens()}), 1.0);
  return ops::row_scale(features, factor);
}

ScorePyramid fts_forward(std::span<const Var> features,
                         const geometry::PyramidGeometry& geom, FtsParams& params) {
  const std::size_t levels = features.size();
  if (levels < 2) throw std::invalid_argument("fts_forward: need at least 2 levels");
  if (levels != geom.num_levels() || levels != params.num_levels()) {
    throw std::invalid_argument(fmt::format(
        "fts_forward: {} feature levels, geometry has {}, params expect {}", levels,
        geom.num_levels(), params.num_levels()));
  }
  for (std::size_t l = 0; l < levels; ++l) {
    const Shape want{geom.level(l).tokens(), geom.channels()};
    if (features[l].shape() != want) {
      throw std::invalid_argument(fmt::format("fts_forward: level {} features {} expected {}",
                                              l, shape_string(features[l].shape()),
                                              shape_string(want)));
    }
  }
  const auto score_map = [&](const Var& tokens, std::size_t l) {
    const auto& lv = geom.level(l);
    return ops::reshape(mlp_forward(tokens, params.mlp_f), {lv.height, lv.width});
  };

  ScorePyramid out;
  out.levels.resize(levels);
  out.levels[levels - 1] = score_map(features[levels - 1], levels - 1);
  for (std::size_t l = levels - 1; l >= 1; --l) {
    Var modulated = modulate_features(features[l - 1], out.levels[l],
                                      params.alphas[l - 1], geom.level(l - 1));
    out.levels[l - 1] = score_map(modulated, l - 1);
  }
  return out;
}

ScorePyramid fts_forward(Tape& tape, const geometry::FeaturePyramid& pyramid,
                         const geometry::PyramidGeometry& geom, FtsParams& params) {
  pyramid.validate(geom);
  std::vector<Var> features;
  for (std::size_t l = 0; l < pyramid.levels.size(); ++l) {
    features.push_back(tape.constant(
        pyramid.levels[l].reshaped({geom.level(l).tokens(), geom.channels()})));
  }
  return fts_forward(features, geom, params);
}

Var focal_loss(const ScorePyramid& scores, const geometry::LabelPyramid& labels,
               const FocalConfig& config) {
  if (scores.levels.empty() || scores.levels.size() != labels.levels.size()) {
    throw std::invalid_argument(fmt::format("focal_loss: {} score levels vs {} label levels",
                                            scores.levels.size(), labels.levels.size()));
  }
  std::size_t count = 0;
  for (std::size_t l = 0; l < scores.levels.size(); ++l) {
    if (scores.levels[l].shape() != labels.levels[l].shape()) {
      throw std::invalid_argument(fmt::format(
          "focal_loss: level {} scores {} vs labels {}", l,
          shape_string(scores.levels[l].shape()),
          shape_string(labels.levels[l].shape())));
    }
    count += labels.levels[l].size();
  }
  if (count == 0) throw std::invalid_argument("focal_loss: no tokens");
  const double a = config.alpha, g = config.gamma;
  const double lo = config.clamp, hi = 1.0 - config.clamp;

  double total = 0.0;
  for (std::size_t l = 0; l < scores.levels.size(); ++l) {
    const Tensor& p = scores.levels[l].value();
    const Tensor& y = labels.levels[l];
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double q = std::clamp(p[i], lo, hi);
      total += y[i] != 0.0 ? -a * std::pow(1.0 - q, g) * std::log(q)
                           : -(1.0 - a) * std::pow(q, g) * std::log(1.0 - q);
    }
  }
  const double inv = 1.0 / static_cast<double>(count);
  Tape& tape = scores.levels[0].tape();
  return tape.record(
      Tensor::scalar(total * inv), scores.levels,
      [vars = scores.levels, labels = labels.levels, a, g, lo, hi, inv](
          const Tensor& grad, std::span<Tensor* const> gi) {
        for (std::size_t l = 0; l < vars.size(); ++l) {
          if (!gi[l]) continue;
          const Tensor& p = vars[l].value();
          const Tensor& y = labels[l];
          for (std::size_t i = 0; i < p.size(); ++i) {
            if (p[i] < lo || p[i] > hi) continue;  // clamped: flat
            const double q = p[i];
            double d;
            if (y[i] != 0.0) {
              d = a * (g * std::pow(1.0 - q, g - 1.0) * std::log(q) -
                       std::pow(1.0 - q, g) / q);
            } else {
              d = -(1.0 - a) * (g * std::pow(q, g - 1.0) * std::log(1.0 - q) -
                                std::pow(q, g) / (1.0 - q));
            }
            (*gi[l])[i] += grad[0] * inv * d;
          }
        }
      });
}

}  // namespace fdetr::scoring
