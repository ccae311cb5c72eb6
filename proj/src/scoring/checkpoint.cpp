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

#include "focusdetr/scoring/checkpoint.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

#include "focusdetr/numerics/tensor_io.hpp"

namespace fdetr::scoring {
namespace {

const char* activation_name(Activation a) { return a == Activation::kRelu ? "relu" : "gelu"; }

Activation parse_activation(const std::string& s) {
  if (s == "relu") return Activation::kRelu;
  if (s == "gelu") return Activation::kGelu;
  throw std::runtime_error(fmt::format("unknown activation '{}'", s));
}

}  // namespace

std::filesystem::path manifest_path(const std::filesystem::path& checkpoint) {
  return std::filesystem::path(checkpoint.string() + ".manifest.json");
}

void save_fts_checkpoint(const std::filesystem::path& path, FtsParams& params,
                         std::uint64_t seed, const std::string& config_hash) {
  std::vector<NamedTensor> tensors;
  nlohmann::ordered_json manifest;
  manifest["format"] = "focusdetr-checkpoint";
  manifest["version"] = 1;
  manifest["seed"] = seed;
  manifest["config_hash"] = config_hash;
  manifest["fts"] = {{"widths", params.mlp_f.spec.widths},
                     {"activation", activation_name(params.mlp_f.spec.activation)},
                     {"levels", params.num_levels()}};
  manifest["parameters"] = nlohmann::ordered_json::array();
  for (Parameter* p : params.parameters()) {
    tensors.push_back({p->name, p->value});
    manifest["parameters"].push_back({{"name", p->name}, {"shape", p->value.shape()}});
  }
  write_ftsr(path, tensors);
  std::ofstream file(manifest_path(path), std::ios::trunc);
  if (!file) throw std::runtime_error(fmt::format("cannot write manifest for {}", path.string()));
  file << manifest.dump(2) << "\n";
}

LoadedCheckpoint load_fts_checkpoint(const std::filesystem::path& path) {
  std::ifstream file(manifest_path(path));
  if (!file) {
    throw std::runtime_error(fmt::format("missing manifest {}", manifest_path(path).string()));
  }
  std::ostringstream text;
  text << file.rdbuf();
  const auto j = nlohmann::json::parse(text.str());

  LoadedCheckpoint out;
  CheckpointManifest& m = out.manifest;
  m.seed = j.at("seed").get<std::uint64_t>();
  m.config_hash = j.at("config_hash").get<std::string>();
  m.fts_spec.widths = j.at("fts").at("widths").get<std::vector<std::size_t>>();
  m.fts_spec.activation = parse_activation(j.at("fts").at("activation").get<std::string>());
  m.fts_spec.final_activation = FinalActivation::kSigmoid;
  m.num_levels = j.at("fts").at("levels").get<std::size_t>();
  for (const auto& p : j.at("parameters")) {
    m.names.push_back(p.at("name").get<std::string>());
    m.shapes.push_back(p.at("shape").get<Shape>());
  }

  // Rebuild the parameter layout, then overwrite every value by name.
  Rng unused(0);
  const auto& w = m.fts_spec.widths;
  if (w.size() < 2 || w.back() != 1) {
    throw std::runtime_error("checkpoint: selector MLP must end in width 1");
  }
  out.params = FtsParams::init(w.front(), std::vector<std::size_t>(w.begin() + 1, w.end() - 1),
                               m.num_levels, m.fts_spec.activation, unused);
  const auto tensors = read_ftsr(path);
  auto slots = out.params.parameters();
  if (tensors.size() != slots.size()) {
    throw std::runtime_error(fmt::format("checkpoint holds {} tensors, expected {}",
                                         tensors.size(), slots.size()));
  }
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (tensors[i].name != slots[i]->name || tensors[i].tensor.shape() != slots[i]->value.shape()) {
      throw std::runtime_error(fmt::format(
          "checkpoint tensor {} is '{}' {}, expected '{}' {}", i, tensors[i].name,
          shape_string(tensors[i].tensor.shape()), slots[i]->name,
          shape_string(slots[i]->value.shape())));
    }
    *slots[i] = Parameter(slots[i]->name, tensors[i].tensor);
  }
  return out;
}

}  // namespace fdetr::scoring
