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

#include "focusdetr/numerics/tensor_io.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

namespace fdetr {

std::string encode_ftsr(const std::vector<NamedTensor>& tensors) {
  nlohmann::json header;
  header["format"] = "ftsr";
  header["version"] = 1;
  header["dtype"] = "f64";
  header["byte_order"] = "little";
  header["tensors"] = nlohmann::json::array();
  std::size_t total = 0;
  for (const auto& t : tensors) {
    header["tensors"].push_back({{"name", t.name}, {"shape", t.tensor.shape()}});
    total += t.tensor.size();
  }
  std::string out = header.dump();
  out.push_back('\n');
  out.reserve(out.size() + total * 8);
  for (const auto& t : tensors) {
    for (double v : t.tensor.data()) {
      const auto bits = std::bit_cast<std::uint64_t>(v);
      for (int b = 0; b < 8; ++b) {
        out.push_back(static_cast<char>((bits >> (8 * b)) & 0xFF));
      }
    }
  }
  return out;
}

std::vector<NamedTensor> decode_ftsr(const std::string& bytes) {
  const auto newline = bytes.find('\n');
  if (newline == std::string::npos) {
    throw std::runtime_error("ftsr: missing header line");
  }
  const auto header = nlohmann::json::parse(bytes.substr(0, newline));
  if (header.value("format", "") != "ftsr" || header.value("dtype", "") != "f64" ||
      header.value("byte_order", "") != "little") {
    throw std::runtime_error(fmt::format("ftsr: unsupported header {}", header.dump()));
  }
  std::vector<NamedTensor> out;
  std::size_t pos = newline + 1;
  for (const auto& entry : header.at("tensors")) {
    Shape shape = entry.at("shape").get<Shape>();
    const std::size_t n = shape_numel(shape);
    if (pos + n * 8 > bytes.size()) {
      throw std::runtime_error(fmt::format("ftsr: truncated payload for '{}'",
                                           entry.at("name").get<std::string>()));
    }
    std::vector<double> data(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t bits = 0;
      for (int b = 0; b < 8; ++b) {
        bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[pos + 8 * i + b]))
                << (8 * b);
      }
      data[i] = std::bit_cast<double>(bits);
    }
    pos += n * 8;
    out.push_back({entry.at("name").get<std::string>(),
                   Tensor(std::move(shape), std::move(data))});
  }
  if (pos != bytes.size()) {
    throw std::runtime_error("ftsr: trailing bytes after payload");
  }
  return out;
}

void write_ftsr(const std::filesystem::path& path,
                const std::vector<NamedTensor>& tensors) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  const std::string bytes = encode_ftsr(tensors);
  file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::vector<NamedTensor> read_ftsr(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error(fmt::format("cannot read {}", path.string()));
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return decode_ftsr(buffer.str());
}

}  // namespace fdetr
