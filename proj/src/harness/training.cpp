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

#include "focusdetr/harness/training.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "focusdetr/numerics/ops.hpp"

namespace fdetr::harness {

void TrainConfig::validate() const {
  if (batch_size == 0) throw std::invalid_argument("TrainConfig: batch_size must be positive");
  if (!(lr >= 0.0) || !std::isfinite(lr)) {
    throw std::invalid_argument(fmt::format("TrainConfig: lr {} must be finite and >= 0", lr));
  }
  if (!(lambda_f >= 0.0)) throw std::invalid_argument("TrainConfig: lambda_f must be >= 0");
}

TrainResult train_fts(const std::vector<SyntheticScene>& scenes,
                      const geometry::PyramidGeometry& geom, scoring::FtsParams& params,
                      const TrainConfig& config, const EpochCallback& on_epoch) {
  if (scenes.empty()) throw std::invalid_argument("train_fts: no scenes");
  config.validate();
  Rng shuffle(config.seed);
  std::vector<std::size_t> order(scenes.size());
  std::iota(order.begin(), order.end(), 0);
  const auto slots = params.parameters();

  TrainResult result;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    // Fisher-Yates with the project RNG keeps the order platform independent.
    for (std::size_t i = order.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(shuffle.uniform_int(0, static_cast<std::int64_t>(i) - 1));
      std::swap(order[i - 1], order[j]);
    }
    // Indexed by scene so the epoch mean does not depend on the shuffle.
    std::vector<double> scene_loss(scenes.size(), 0.0);
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(start + config.batch_size, order.size());
      params.zero_grad();
      for (std::size_t b = start; b < end; ++b) {
        const auto& scene = scenes[order[b]];
        try {
          Tape tape;
          const auto scores = scoring::fts_forward(tape, scene.features, geom, params);
          const Var loss =
              ops::scale(scoring::focal_loss(scores, scene.labels, config.focal), config.lambda_f);
          scene_loss[order[b]] = loss.value().item();
          if (!std::isfinite(scene_loss[order[b]])) throw std::domain_error("loss is not finite");
          tape.backward(loss);
        } catch (const std::domain_error& e) {
          throw std::runtime_error(fmt::format("train_fts: diverged at epoch {} scene {}: {}",
                                               epoch, order[b], e.what()));
        }
      }
      const double step = config.lr / static_cast<double>(end - start);
      for (Parameter* p : slots) {
        for (std::size_t i = 0; i < p->value.size(); ++i) p->value[i] -= step * p->grad[i];
        if (!p->value.all_finite()) {
          throw std::runtime_error(
              fmt::format("train_fts: parameter {} diverged at epoch {}", p->name, epoch));
        }
      }
    }
    const double total = std::accumulate(scene_loss.begin(), scene_loss.end(), 0.0);
    result.loss_curve.push_back(total / static_cast<double>(scenes.size()));
    if (on_epoch && !on_epoch(epoch, result.loss_curve.back())) break;
  }
  return result;
}

}  // namespace fdetr::harness
