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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "focusdetr/complexity/cost_model.hpp"
#include "focusdetr/encoder/workspace.hpp"
#include "focusdetr/harness/scenes.hpp"
#include "focusdetr/harness/training.hpp"

namespace fdetr::harness {

/// Everything a CLI run needs. Missing JSON keys keep the defaults below.
struct HarnessConfig {
  std::uint64_t seed = 0;
  SceneSpec scene;
  std::size_t train_scenes = 200;
  std::size_t eval_scenes = 200;
  std::vector<std::size_t> fts_hidden{16};
  Activation fts_activation = Activation::kRelu;
  TrainConfig train = default_train();
  encoder::EncoderConfig encoder = encoder::EncoderConfig::toy();
  double eval_ratio = 0.3;

  static TrainConfig default_train();

  /// Scene specs of the training and held-out sets: same feature model,
  /// different box and noise draws.
  SceneSpec train_spec() const;
  SceneSpec eval_spec() const;
  /// Independent generators for parameter initialization.
  Rng fts_rng() const;
  Rng encoder_rng() const;
  /// `train` with its shuffle seed derived from `seed`.
  TrainConfig train_settings() const;

  void validate() const;
  nlohmann::json to_json() const;
  static HarnessConfig from_json(const nlohmann::json& j);
};

nlohmann::json encoder_config_to_json(const encoder::EncoderConfig& c);
encoder::EncoderConfig encoder_config_from_json(const nlohmann::json& j,
                                                encoder::EncoderConfig base = {});
nlohmann::json train_config_to_json(const TrainConfig& c);
TrainConfig train_config_from_json(const nlohmann::json& j, TrainConfig base = {});
complexity::CostConfig cost_config_from_json(const nlohmann::json& j);

/// 64-bit FNV-1a of `bytes`, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& bytes);
/// Hash of the canonical (key-sorted, compact) JSON form of the config.
std::string config_hash(const HarnessConfig& config);

nlohmann::json read_json_file(const std::filesystem::path& path);
HarnessConfig read_config(const std::filesystem::path& path);

}  // namespace fdetr::harness
