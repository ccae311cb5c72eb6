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
#include <string>
#include <vector>

#include "focusdetr/numerics/autodiff.hpp"
#include "focusdetr/numerics/random.hpp"

namespace fdetr {

enum class Activation { kRelu, kGelu };
enum class FinalActivation { kNone, kSigmoid };

struct MlpSpec {
  std::vector<std::size_t> widths;  // input, hidden..., output
  Activation activation = Activation::kRelu;
  FinalActivation final_activation = FinalActivation::kNone;

  std::size_t num_layers() const { return widths.size() - 1; }
  void validate() const;
};

/// Weight [fan_in×fan_out] drawn from uniform(-a, a), a = sqrt(6/(fan_in+fan_out)).
Parameter xavier_parameter(std::string name, std::size_t fan_in,
                           std::size_t fan_out, Rng& rng);

/// Parameters of an MLP, stored as (weight, bias) pairs per layer.
struct Mlp {
  MlpSpec spec;
  std::vector<Parameter> params;

  static Mlp init(MlpSpec spec, Rng& rng, const std::string& prefix);
  /// All weights and biases zero.
  static Mlp zeros(MlpSpec spec, const std::string& prefix);
};

Var linear_forward(const Var& input, Parameter& weight, Parameter& bias);

Var mlp_forward(const Var& input, const MlpSpec& spec,
                std::span<Parameter> params);
inline Var mlp_forward(const Var& input, Mlp& mlp) {
  return mlp_forward(input, mlp.spec, mlp.params);
}

/// Per-row normalization to zero mean and unit variance (epsilon 1e-5),
/// followed by an elementwise affine map.
Var layer_norm(const Var& input, Parameter& gain, Parameter& shift,
               double eps = 1e-5);

/// Indices of the k largest scores, ordered by descending score with ties
/// broken by ascending index.
std::vector<std::size_t> topk_select(std::span<const double> scores,
                                     std::size_t k);

}  // namespace fdetr
