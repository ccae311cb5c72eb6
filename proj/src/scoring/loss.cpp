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

#include "focusdetr/scoring/loss.hpp"

#include <stdexcept>

#include <fmt/format.h>

#include "focusdetr/numerics/ops.hpp"

namespace fdetr::scoring {

void LossWeights::validate() const {
  if (match < 0.0 || dn < 0.0 || f < 0.0 || enc < 0.0) {
    throw std::invalid_argument(fmt::format(
        "loss weights must be nonnegative (match={}, dn={}, f={}, enc={})", match, dn,
        f, enc));
  }
}

Var total_loss(const std::map<std::string, Var>& parts, const LossWeights& weights) {
  weights.validate();
  const auto focal = parts.find("f");
  if (focal == parts.end()) {
    throw std::invalid_argument("total_loss: the foreground term \"f\" is required");
  }
  const std::map<std::string, double> lambda{
      {"match", weights.match}, {"dn", weights.dn}, {"f", weights.f}, {"enc", weights.enc}};
  Var total;
  bool first = true;
  for (const auto& [name, value] : parts) {
    const auto w = lambda.find(name);
    if (w == lambda.end()) {
      throw std::invalid_argument(fmt::format("total_loss: unknown term \"{}\"", name));
    }
    if (value.value().size() != 1) {
      throw std::invalid_argument(fmt::format("total_loss: term \"{}\" is not scalar", name));
    }
    Var term = ops::scale(ops::reshape(value, {}), w->second);
    total = first ? term : ops::add(total, term);
    first = false;
  }
  return total;
}

}  // namespace fdetr::scoring
