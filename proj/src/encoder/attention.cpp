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

#include "focusdetr/encoder/attention.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "focusdetr/numerics/bilinear.hpp"
#include "focusdetr/numerics/ops.hpp"

namespace fdetr::encoder {
namespace {

void push_linear(std::vector<Parameter>& out, const std::string& name, std::size_t fan_in,
                 std::size_t fan_out, Rng& rng) {
  out.push_back(xavier_parameter(name + ".weight", fan_in, fan_out, rng));
  out.emplace_back(name + ".bias", Tensor({fan_out}));
}

void push_zero_linear(std::vector<Parameter>& out, const std::string& name, std::size_t fan_in,
                      std::size_t fan_out) {
  out.emplace_back(name + ".weight", Tensor({fan_in, fan_out}));
  out.emplace_back(name + ".bias", Tensor({fan_out}));
}

}  // namespace

MhsaParams MhsaParams::init(std::size_t channels, Rng& rng, const std::string& prefix) {
  MhsaParams p;
  for (const char* which : {"q", "k", "v", "out"}) {
    push_linear(p.params, fmt::format("{}.{}", prefix, which), channels, channels, rng);
  }
  return p;
}

Var mhsa(const Var& query, const Var& key, const Var& value, MhsaParams& params,
         std::size_t heads) {
  const std::size_t c = query.shape().at(1);
  if (heads == 0 || c % heads != 0) {
    throw std::invalid_argument(fmt::format("mhsa: {} channels not divisible by {} heads", c, heads));
  }
  if (key.shape() != query.shape() || value.shape() != query.shape()) {
    throw std::invalid_argument(fmt::format("mhsa: q {} k {} v {} must match",
                                            shape_string(query.shape()),
                                            shape_string(key.shape()),
                                            shape_string(value.shape())));
  }
  const std::size_t d = c / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  const Var q = linear_forward(query, params.weight(0), params.bias(0));
  const Var k = linear_forward(key, params.weight(1), params.bias(1));
  const Var v = linear_forward(value, params.weight(2), params.bias(2));
  std::vector<Var> per_head;
  per_head.reserve(heads);
  for (std::size_t h = 0; h < heads; ++h) {
    const Var qh = ops::slice_cols(q, h * d, d);
    const Var kh = ops::slice_cols(k, h * d, d);
    const Var vh = ops::slice_cols(v, h * d, d);
    const Var attn = ops::softmax(ops::scale(ops::matmul(qh, ops::transpose(kh)), scale), 1);
    per_head.push_back(ops::matmul(attn, vh));
  }
  return linear_forward(ops::concat_cols(per_head), params.weight(3), params.bias(3));
}

DeformParams DeformParams::init(std::size_t channels, std::size_t heads, std::size_t levels,
                                std::size_t points, Rng& rng, const std::string& prefix) {
  DeformParams p{heads, levels, points, {}};
  const std::size_t samples = heads * levels * points;
  push_linear(p.params, prefix + ".value", channels, channels, rng);
  push_zero_linear(p.params, prefix + ".offset", channels, 2 * samples);
  push_zero_linear(p.params, prefix + ".logit", channels, samples);
  push_linear(p.params, prefix + ".out", channels, channels, rng);
  // Head h starts its points along direction 2πh/M, point p at distance p+1
  // pixels (in Chebyshev norm), so the points do not coincide.
  Tensor& bias = p.bias(kOffset).value;
  for (std::size_t h = 0; h < heads; ++h) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(h) / static_cast<double>(heads);
    double dx = std::cos(theta), dy = std::sin(theta);
    const double norm = std::max(std::abs(dx), std::abs(dy));
    dx /= norm;
    dy /= norm;
    for (std::size_t l = 0; l < levels; ++l) {
      for (std::size_t k = 0; k < points; ++k) {
        const std::size_t idx = (h * levels + l) * points + k;
        bias[2 * idx] = dx * static_cast<double>(k + 1);
        bias[2 * idx + 1] = dy * static_cast<double>(k + 1);
      }
    }
  }
  return p;
}

Var msda_core(const Var& value, const geometry::PyramidGeometry& geom,
              const Tensor& ref_points, const Var& offsets, const Var& weights,
              std::size_t heads, std::size_t points) {
  const std::size_t n = geom.total_tokens(), c = geom.channels();
  const std::size_t levels = geom.num_levels();
  const std::size_t nq = ref_points.dim(0);
  const std::size_t samples = heads * levels * points;
  if (heads == 0 || c % heads != 0) {
    throw std::invalid_argument(
        fmt::format("msda_core: {} channels not divisible by {} heads", c, heads));
  }
  if (value.shape() != Shape{n, c}) {
    throw std::invalid_argument(fmt::format("msda_core: value {} expected {}",
                                            shape_string(value.shape()), shape_string({n, c})));
  }
  if (ref_points.shape() != Shape{nq, 2} || offsets.shape() != Shape{nq, 2 * samples} ||
      weights.shape() != Shape{nq, samples}) {
    throw std::invalid_argument(fmt::format(
        "msda_core: ref {} offsets {} weights {} inconsistent with {} queries × {} samples",
        shape_string(ref_points.shape()), shape_string(offsets.shape()),
        shape_string(weights.shape()), nq, samples));
  }
  const std::size_t d = c / heads;

  // Visits every (query, head, level, point) with its stencil and the value
  // pointer of that head's channel slice. Captures by copy because the
  // backward closure keeps it.
  const auto for_each_sample = [=](const Tensor& off, auto&& fn) {
    for (std::size_t q = 0; q < nq; ++q) {
      for (std::size_t h = 0; h < heads; ++h) {
        for (std::size_t l = 0; l < levels; ++l) {
          const auto& lv = geom.level(l);
          const double w = static_cast<double>(lv.width), ht = static_cast<double>(lv.height);
          const std::size_t base = geom.level_start(l) * c + h * d;
          for (std::size_t p = 0; p < points; ++p) {
            const std::size_t idx = (h * levels + l) * points + p;
            const double x = ref_points.at(q, 0) + off.at(q, 2 * idx) / w;
            const double y = ref_points.at(q, 1) + off.at(q, 2 * idx + 1) / ht;
            fn(q, h, idx, base, lv, detail::make_stencil(x, y, lv.height, lv.width, c, d));
          }
        }
      }
    }
  };

  Tensor out({nq, c});
  {
    const double* v = value.value().data().data();
    const Tensor& a = weights.value();
    double* o = out.data().data();
    for_each_sample(offsets.value(), [&](std::size_t q, std::size_t h, std::size_t idx,
                                         std::size_t base, const geometry::LevelShape&,
                                         const detail::Stencil& st) {
      detail::stencil_gather(st, v + base, a.at(q, idx), o + q * c + h * d);
    });
  }

  return value.tape().record(
      std::move(out), {value, offsets, weights},
      [value, offsets, weights, for_each_sample, c, d](const Tensor& grad,
                                                       std::span<Tensor* const> gi) {
        const double* v = value.value().data().data();
        const Tensor& a = weights.value();
        const double* g = grad.data().data();
        std::vector<double> sample(d);
        for_each_sample(offsets.value(), [&](std::size_t q, std::size_t h, std::size_t idx,
                                             std::size_t base, const geometry::LevelShape& lv,
                                             const detail::Stencil& st) {
          const double* gq = g + q * c + h * d;
          const double aw = a.at(q, idx);
          if (gi[0]) detail::stencil_scatter(st, gq, aw, gi[0]->data().data() + base);
          if (gi[1]) {
            double gx = 0.0, gy = 0.0;
            detail::stencil_coord_grad(st, v + base, gq, aw, gx, gy);
            gi[1]->at(q, 2 * idx) += gx / static_cast<double>(lv.width);
            gi[1]->at(q, 2 * idx + 1) += gy / static_cast<double>(lv.height);
          }
          if (gi[2]) {
            std::fill(sample.begin(), sample.end(), 0.0);
            detail::stencil_gather(st, v + base, 1.0, sample.data());
            double dot = 0.0;
            for (std::size_t ch = 0; ch < d; ++ch) dot += gq[ch] * sample[ch];
            gi[2]->at(q, idx) += dot;
          }
        });
      });
}

DeformOutput ms_deform_attn(const Var& queries, const Tensor& ref_points,
                            const Var& value_tokens, const geometry::PyramidGeometry& geom,
                            DeformParams& params) {
  if (params.levels != geom.num_levels()) {
    throw std::invalid_argument(fmt::format("ms_deform_attn: params for {} levels, geometry has {}",
                                            params.levels, geom.num_levels()));
  }
  const std::size_t nq = queries.shape().at(0);
  const std::size_t group = params.levels * params.points;
  const Var value = linear_forward(value_tokens, params.weight(DeformParams::kValue),
                                   params.bias(DeformParams::kValue));
  const Var offsets = linear_forward(queries, params.weight(DeformParams::kOffset),
                                     params.bias(DeformParams::kOffset));
  const Var logits = linear_forward(queries, params.weight(DeformParams::kLogit),
                                    params.bias(DeformParams::kLogit));
  const Var weights = ops::reshape(
      ops::softmax(ops::reshape(logits, {nq * params.heads, group}), 1),
      {nq, params.heads * group});
  const Var sampled =
      msda_core(value, geom, ref_points, offsets, weights, params.heads, params.points);
  const Var out = linear_forward(sampled, params.weight(DeformParams::kOutput),
                                 params.bias(DeformParams::kOutput));
  return {out, weights};
}

}  // namespace fdetr::encoder
