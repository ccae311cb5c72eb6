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
#include <cstdint>
#include <functional>
#include <vector>

#include "focusdetr/harness/scenes.hpp"
#include "focusdetr/scoring/fts.hpp"

namespace fdetr::harness {

struct TrainConfig {
  std::size_t epochs = 100;
  double lr = 1.0;
  std::size_t batch_size = 8;
  /// Weight of the focal term in the minimized objective.
  double lambda_f = 1.5;
  scoring::FocalConfig focal;
  /// Seeds the per-epoch scene shuffle.
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrainResult {
  /// Mean objective λ_f·focal over the scenes of each epoch, measured during
  /// the epoch's forward passes.
  std::vector<double> loss_curve;
};

/// Called after each epoch with (epoch, mean loss); returning false stops.
using EpochCallback = std::function<bool(std::size_t, double)>;

/// Minibatch SGD with a fixed learning rate on λ_f·focal_loss. Each step
/// applies the batch-mean gradient. Throws std::runtime_error naming the
/// epoch and scene if the loss becomes non-finite.
TrainResult train_fts(const std::vector<SyntheticScene>& scenes,
                      const geometry::PyramidGeometry& geom, scoring::FtsParams& params,
                      const TrainConfig& config, const EpochCallback& on_epoch = {});

}  // namespace fdetr::harness
