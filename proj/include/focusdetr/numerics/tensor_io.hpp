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

#include <filesystem>
#include <string>
#include <vector>

#include "focusdetr/numerics/tensor.hpp"

namespace fdetr {

struct NamedTensor {
  std::string name;
  Tensor tensor;
};

/// `.ftsr` container: one line of JSON header terminated by '\n', e.g.
///
///   {"byte_order":"little","dtype":"f64","format":"ftsr","tensors":[{"name":"w","shape":[2,3]}],"version":1}
///
/// followed by every tensor's values as raw little-endian IEEE-754 doubles,
/// in header order.
void write_ftsr(const std::filesystem::path& path,
                const std::vector<NamedTensor>& tensors);
std::vector<NamedTensor> read_ftsr(const std::filesystem::path& path);

std::string encode_ftsr(const std::vector<NamedTensor>& tensors);
std::vector<NamedTensor> decode_ftsr(const std::string& bytes);

}  // namespace fdetr
