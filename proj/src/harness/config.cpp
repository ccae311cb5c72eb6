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

#include "focusdetr/harness/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace fdetr::harness {
namespace {

constexpr std::uint64_t kEvalStream = 0xE7A1;
constexpr std::uint64_t kFtsStream = 0xF75;
constexpr std::uint64_t kEncoderStream = 0xE4C;
constexpr std::uint64_t kShuffleStream = 0x5F1;

const char* activation_name(Activation a) { return a == Activation::kRelu ? "relu" : "gelu"; }

Activation parse_activation(const std::string& s) {
  if (s == "relu") return Activation::kRelu;
  if (s == "gelu") return Activation::kGelu;
  throw std::invalid_argument(fmt::format("unknown activation '{}'", s));
}

std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) { return Rng(seed).fork(stream)(); }

}  // namespace

TrainConfig HarnessConfig::default_train() {
  TrainConfig t;
  t.epochs = 60;
  t.lr = 1.0;
  t.batch_size = 8;
  t.lambda_f = 1.5;
  return t;
}

SceneSpec HarnessConfig::train_spec() const {
  SceneSpec s = scene;
  s.seed = seed;
  return s;
}

SceneSpec HarnessConfig::eval_spec() const {
  SceneSpec s = scene;
  s.seed = derive(seed, kEvalStream);
  return s;
}

Rng HarnessConfig::fts_rng() const { return Rng(derive(seed, kFtsStream)); }
Rng HarnessConfig::encoder_rng() const { return Rng(derive(seed, kEncoderStream)); }

TrainConfig HarnessConfig::train_settings() const {
  TrainConfig t = train;
  t.seed = derive(seed, kShuffleStream);
  return t;
}

void HarnessConfig::validate() const {
  scene.validate();
  train.validate();
  encoder.validate();
  if (encoder.channels != scene.channels) {
    throw std::invalid_argument(fmt::format("config: encoder channels {} differ from scene channels {}",
                                            encoder.channels, scene.channels));
  }
  if (train_scenes == 0 || eval_scenes == 0) {
    throw std::invalid_argument("config: scene counts must be positive");
  }
  if (!(eval_ratio > 0.0 && eval_ratio <= 1.0)) {
    throw std::invalid_argument(fmt::format("config: eval_ratio {} outside (0, 1]", eval_ratio));
  }
}

nlohmann::json encoder_config_to_json(const encoder::EncoderConfig& c) {
  return {{"num_layers", c.num_layers}, {"channels", c.channels},
          {"heads", c.heads},           {"points", c.points},
          {"object_tokens", c.object_tokens}, {"keep_ratios", c.keep_ratios}};
}

encoder::EncoderConfig encoder_config_from_json(const nlohmann::json& j,
                                                encoder::EncoderConfig base) {
  base.channels = j.value("channels", base.channels);
  base.heads = j.value("heads", base.heads);
  base.points = j.value("points", base.points);
  base.object_tokens = j.value("object_tokens", base.object_tokens);
  base.keep_ratios = j.value("keep_ratios", base.keep_ratios);
  base.num_layers = j.value("num_layers", base.keep_ratios.size());
  base.validate();
  return base;
}

nlohmann::json train_config_to_json(const TrainConfig& c) {
  return {{"epochs", c.epochs},
          {"lr", c.lr},
          {"batch_size", c.batch_size},
          {"lambda_f", c.lambda_f},
          {"focal", {{"alpha", c.focal.alpha}, {"gamma", c.focal.gamma}}}};
}

TrainConfig train_config_from_json(const nlohmann::json& j, TrainConfig base) {
  base.epochs = j.value("epochs", base.epochs);
  base.lr = j.value("lr", base.lr);
  base.batch_size = j.value("batch_size", base.batch_size);
  base.lambda_f = j.value("lambda_f", base.lambda_f);
  if (j.contains("focal")) {
    base.focal.alpha = j["focal"].value("alpha", base.focal.alpha);
    base.focal.gamma = j["focal"].value("gamma", base.focal.gamma);
  }
  base.validate();
  return base;
}

complexity::CostConfig cost_config_from_json(const nlohmann::json& j) {
  complexity::CostConfig c;
  c.points = j.value("points", c.points);
  c.channels = j.value("channels", c.channels);
  c.heads = j.value("heads", c.heads);
  c.encoder_tokens = j.value("encoder_tokens", c.encoder_tokens);
  c.decoder_queries = j.value("decoder_queries", c.decoder_queries);
  c.keep_ratio = j.value("keep_ratio", c.keep_ratio);
  c.object_tokens = j.value("object_tokens", c.object_tokens);
  c.encoder_layers = j.value("encoder_layers", c.encoder_layers);
  c.decoder_layers = j.value("decoder_layers", c.decoder_layers);
  c.validate();
  return c;
}

nlohmann::json HarnessConfig::to_json() const {
  return {{"seed", seed},
          {"scene", scene.to_json()},
          {"train_scenes", train_scenes},
          {"eval_scenes", eval_scenes},
          {"fts", {{"hidden", fts_hidden}, {"activation", activation_name(fts_activation)}}},
          {"train", train_config_to_json(train)},
          {"encoder", encoder_config_to_json(encoder)},
          {"eval_ratio", eval_ratio}};
}

HarnessConfig HarnessConfig::from_json(const nlohmann::json& j) {
  HarnessConfig c;
  c.seed = j.value("seed", c.seed);
  if (j.contains("scene")) c.scene = SceneSpec::from_json(j["scene"]);
  c.train_scenes = j.value("train_scenes", c.train_scenes);
  c.eval_scenes = j.value("eval_scenes", c.eval_scenes);
  if (j.contains("fts")) {
    c.fts_hidden = j["fts"].value("hidden", c.fts_hidden);
    c.fts_activation =
        parse_activation(j["fts"].value("activation", std::string(activation_name(c.fts_activation))));
  }
  if (j.contains("train")) c.train = train_config_from_json(j["train"], c.train);
  if (j.contains("encoder")) c.encoder = encoder_config_from_json(j["encoder"], c.encoder);
  c.eval_ratio = j.value("eval_ratio", c.eval_ratio);
  c.validate();
  return c;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

std::string config_hash(const HarnessConfig& config) {
  // nlohmann::json keeps object keys sorted, so dump() is canonical.
  return fnv1a_hex(config.to_json().dump());
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open {}", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return nlohmann::json::parse(text.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(fmt::format("{}: {}", path.string(), e.what()));
  }
}

HarnessConfig read_config(const std::filesystem::path& path) {
  return HarnessConfig::from_json(read_json_file(path));
}

}  // namespace fdetr::harness
