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

#include "focusdetr/scoring/fts.hpp"

namespace fdetr::scoring {

struct CheckpointManifest {
  std::uint64_t seed = 0;
  std::string config_hash;
  MlpSpec fts_spec;
  std::size_t num_levels = 0;
  std::vector<std::string> names;
  std::vector<Shape> shapes;
};

/// Manifest path paired with a checkpoint: "<path>.manifest.json".
std::filesystem::path manifest_path(const std::filesystem::path& checkpoint);

/// Writes the parameters to `path` (ftsr) and the manifest beside it.
void save_fts_checkpoint(const std::filesystem::path& path, FtsParams& params,
                         std::uint64_t seed, const std::string& config_hash);

struct LoadedCheckpoint {
  FtsParams params;
  CheckpointManifest manifest;
};

LoadedCheckpoint load_fts_checkpoint(const std::filesystem::path& path);

}  // namespace fdetr::scoring
