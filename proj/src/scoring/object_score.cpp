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

#include "focusdetr/scoring/object_score.hpp"

#include <stdexcept>

#include <fmt/format.h>

#include "focusdetr/numerics/ops.hpp"

namespace fdetr::scoring {

CategoryHead CategoryHead::init(std::size_t channels,
                                const std::vector<std::size_t>& hidden,
                                std::size_t num_classes, Activation activation,
                                Rng& rng) {
  if (num_classes == 0) throw std::invalid_argument("CategoryHead: zero classes");
  MlpSpec spec;
  spec.widths.push_back(channels);
  spec.widths.insert(spec.widths.end(), hidden.begin(), hidden.end());
  spec.widths.push_back(num_classes);
  spec.activation = activation;
  spec.final_activation = FinalActivation::kSigmoid;
  return CategoryHead{Mlp::init(std::move(spec), rng, "category.mlp")};
}

std::vector<Parameter*> CategoryHead::parameters() {
  std::vector<Parameter*> out;
  for (auto& p : mlp_c.params) out.push_back(&p);
  return out;
}

Var category_score(const Var& tokens, CategoryHead& head) {
  if (head.mlp_c.spec.final_activation != FinalActivation::kSigmoid) {
    throw std::invalid_argument("category head must end in a sigmoid");
  }
  return ops::row_max(mlp_forward(tokens, head.mlp_c));
}

Var object_score(const Var& fg_scores, const Var& tokens, CategoryHead& head) {
  if (fg_scores.shape().size() != 1 || tokens.shape().size() != 2 ||
      fg_scores.shape()[0] != tokens.shape()[0]) {
    throw std::invalid_argument(fmt::format(
        "object_score: foreground scores {} not aligned with tokens {}",
        shape_string(fg_scores.shape()), shape_string(tokens.shape())));
  }
  return ops::mul(fg_scores, category_score(tokens, head));
}

}  // namespace fdetr::scoring
