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

#include "focusdetr/numerics/nn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "focusdetr/numerics/ops.hpp"

namespace fdetr {

void MlpSpec::validate() const {
  if (widths.size() < 2) {
    throw std::invalid_argument("MlpSpec needs at least input and output widths");
  }
  for (std::size_t w : widths) {
    if (w == 0) throw std::invalid_argument("MlpSpec widths must be positive");
  }
}

Parameter xavier_parameter(std::string name, std::size_t fan_in,
                           std::size_t fan_out, Rng& rng) {
  const double bound =
      std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::vector<double> data(fan_in * fan_out);
  for (double& v : data) v = rng.uniform(-bound, bound);
  return Parameter(std::move(name), Tensor({fan_in, fan_out}, std::move(data)));
}

Mlp Mlp::init(MlpSpec spec, Rng& rng, const std::string& prefix) {
  spec.validate();
  Mlp mlp;
  for (std::size_t l = 0; l < spec.num_layers(); ++l) {
    mlp.params.push_back(xavier_parameter(fmt::format("{}.{}.weight", prefix, l),
                                          spec.widths[l], spec.widths[l + 1], rng));
    mlp.params.emplace_back(fmt::format("{}.{}.bias", prefix, l),
                            Tensor({spec.widths[l + 1]}));
  }
  mlp.spec = std::move(spec);
  return mlp;
}

Mlp Mlp::zeros(MlpSpec spec, const std::string& prefix) {
  spec.validate();
  Mlp mlp;
  for (std::size_t l = 0; l < spec.num_layers(); ++l) {
    mlp.params.emplace_back(fmt::format("{}.{}.weight", prefix, l),
                            Tensor({spec.widths[l], spec.widths[l + 1]}));
    mlp.params.emplace_back(fmt::format("{}.{}.bias", prefix, l),
                            Tensor({spec.widths[l + 1]}));
  }
  mlp.spec = std::move(spec);
  return mlp;
}

Var linear_forward(const Var& input, Parameter& weight, Parameter& bias) {
  const Shape& in = input.shape();
  const Shape& w = weight.value.shape();
  if (in.size() != 2 || w.size() != 2 || in[1] != w[0] ||
      bias.value.size() != w[1]) {
    throw std::invalid_argument(fmt::format(
        "linear_forward: input {} incompatible with weight {} / bias {}",
        shape_string(in), shape_string(w), shape_string(bias.value.shape())));
  }
  Tape& tape = input.tape();
  return ops::add_row(ops::matmul(input, tape.param(weight)), tape.param(bias));
}

Var mlp_forward(const Var& input, const MlpSpec& spec,
                std::span<Parameter> params) {
  spec.validate();
  if (params.size() != 2 * spec.num_layers()) {
    throw std::invalid_argument(fmt::format(
        "mlp_forward: {} parameters for a {}-layer MLP", params.size(),
        spec.num_layers()));
  }
  Var x = input;
  for (std::size_t l = 0; l < spec.num_layers(); ++l) {
    Parameter& w = params[2 * l];
    if (w.value.shape() != Shape{spec.widths[l], spec.widths[l + 1]}) {
      throw std::invalid_argument(fmt::format(
          "mlp_forward: layer {} weight {} does not match widths {}->{}", l,
          shape_string(w.value.shape()), spec.widths[l], spec.widths[l + 1]));
    }
    x = linear_forward(x, w, params[2 * l + 1]);
    const bool last = l + 1 == spec.num_layers();
    if (!last) {
      x = spec.activation == Activation::kRelu ? ops::relu(x) : ops::gelu(x);
    } else if (spec.final_activation == FinalActivation::kSigmoid) {
      x = ops::sigmoid(x);
    }
  }
  return x;
}

Var layer_norm(const Var& input, Parameter& gain, Parameter& shift, double eps) {
  const Shape& shape = input.shape();
  if (shape.size() != 2 || shape[1] < 2) {
    throw std::invalid_argument(fmt::format(
        "layer_norm: expected [N×C] with C > 1, got {}", shape_string(shape)));
  }
  const std::size_t n = shape[0], c = shape[1];
  if (gain.value.size() != c || shift.value.size() != c) {
    throw std::invalid_argument("layer_norm: affine parameters must have C entries");
  }
  Tape& tape = input.tape();
  Var g = tape.param(gain);
  Var b = tape.param(shift);

  const Tensor& x = input.value();
  Tensor normalized(shape);
  std::vector<double> inv_std(n);
  Tensor y(shape);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = x.data().data() + i * c;
    double mu = 0.0;
    for (std::size_t j = 0; j < c; ++j) mu += row[j];
    mu /= static_cast<double>(c);
    double var = 0.0;
    for (std::size_t j = 0; j < c; ++j) var += (row[j] - mu) * (row[j] - mu);
    var /= static_cast<double>(c);
    inv_std[i] = 1.0 / std::sqrt(var + eps);
    for (std::size_t j = 0; j < c; ++j) {
      const double xh = (row[j] - mu) * inv_std[i];
      normalized[i * c + j] = xh;
      y[i * c + j] = xh * gain.value[j] + shift.value[j];
    }
  }
  return tape.record(
      std::move(y), {input, g, b},
      [g, normalized = std::move(normalized), inv_std = std::move(inv_std), n,
       c](const Tensor& grad, std::span<Tensor* const> gi) {
        const Tensor& gv = g.value();
        std::vector<double> dxh(c);
        for (std::size_t i = 0; i < n; ++i) {
          const double* xh = normalized.data().data() + i * c;
          const double* go = grad.data().data() + i * c;
          double mean_d = 0.0, mean_dx = 0.0;
          for (std::size_t j = 0; j < c; ++j) {
            dxh[j] = go[j] * gv[j];
            mean_d += dxh[j];
            mean_dx += dxh[j] * xh[j];
            if (gi[1]) (*gi[1])[j] += go[j] * xh[j];
            if (gi[2]) (*gi[2])[j] += go[j];
          }
          mean_d /= static_cast<double>(c);
          mean_dx /= static_cast<double>(c);
          if (gi[0]) {
            for (std::size_t j = 0; j < c; ++j) {
              (*gi[0])[i * c + j] += inv_std[i] * (dxh[j] - mean_d - xh[j] * mean_dx);
            }
          }
        }
      });
}

std::vector<std::size_t> topk_select(std::span<const double> scores,
                                     std::size_t k) {
  if (k < 1 || k > scores.size()) {
    throw std::invalid_argument(fmt::format(
        "topk_select: k = {} outside [1, {}]", k, scores.size()));
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto before = [&scores](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k),
                    order.end(), before);
  order.resize(k);
  return order;
}

}  // namespace fdetr
