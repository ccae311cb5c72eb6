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

#include <map>
#include <string>

#include "focusdetr/numerics/autodiff.hpp"

namespace fdetr::scoring {

/// Weights of the end-to-end objective. Only the selector term is active at
/// this scale; the others stay available as zero-weight slots.
struct LossWeights {
  double match = 0.0;  // "match"
  double dn = 0.0;     // "dn"
  double f = 1.5;      // "f": foreground selector focal loss
  double enc = 0.0;    // "enc"

  void validate() const;
};

/// λ_m·L_match + λ_d·L_dn + λ_f·L_f + λ_e·L_enc over the parts present in
/// `parts`; "f" is required, the others default to zero.
Var total_loss(const std::map<std::string, Var>& parts, const LossWeights& weights);

}  // namespace fdetr::scoring
