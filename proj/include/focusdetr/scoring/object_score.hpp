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

#include "focusdetr/numerics/nn.hpp"

namespace fdetr::scoring {

/// Multi-category predictor: C-dim token → num_classes sigmoid probabilities.
/// There is no background class.
struct CategoryHead {
  Mlp mlp_c;

  static CategoryHead init(std::size_t channels, const std::vector<std::size_t>& hidden,
                           std::size_t num_classes, Activation activation, Rng& rng);
  std::size_t num_classes() const { return mlp_c.spec.widths.back(); }
  std::vector<Parameter*> parameters();
};

/// Per-token maximum category probability, [N×C] → [N].
Var category_score(const Var& tokens, CategoryHead& head);

/// p_j = s_j · max_c sigmoid(MLP_C(T_j))_c for fg_scores [N] and tokens [N×C].
Var object_score(const Var& fg_scores, const Var& tokens, CategoryHead& head);

}  // namespace fdetr::scoring
