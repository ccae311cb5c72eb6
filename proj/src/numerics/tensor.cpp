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

#include "focusdetr/numerics/tensor.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace fdetr {

std::size_t shape_numel(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

std::string shape_string(const Shape& shape) {
  return fmt::format("[{}]", fmt::join(shape, ", "));
}

Tensor::Tensor(Shape shape)
    : shape_(std::move(shape)), data_(shape_numel(shape_), 0.0) {}

Tensor::Tensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (shape_numel(shape_) != data_.size()) {
    throw std::invalid_argument(
        fmt::format("tensor shape {} holds {} values, got {}",
                    shape_string(shape_), shape_numel(shape_), data_.size()));
  }
  require_finite("tensor construction");
}

Tensor Tensor::full(Shape shape, double value) {
  Tensor t(std::move(shape));
  t.fill(value);
  t.require_finite("Tensor::full");
  return t;
}

Tensor Tensor::scalar(double value) { return Tensor(Shape{}, {value}); }

Tensor Tensor::vector(std::vector<double> values) {
  const std::size_t n = values.size();
  return Tensor(Shape{n}, std::move(values));
}

Tensor Tensor::matrix(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t n = rows.size();
  const std::size_t m = n == 0 ? 0 : rows.begin()->size();
  std::vector<double> data;
  data.reserve(n * m);
  for (const auto& row : rows) {
    if (row.size() != m) {
      throw std::invalid_argument("Tensor::matrix: ragged rows");
    }
    data.insert(data.end(), row.begin(), row.end());
  }
  return Tensor(Shape{n, m}, std::move(data));
}

std::size_t Tensor::dim(std::size_t axis) const {
  if (axis >= shape_.size()) {
    throw std::out_of_range(fmt::format("axis {} out of range for shape {}",
                                        axis, shape_string(shape_)));
  }
  return shape_[axis];
}

double& Tensor::at(std::size_t r, std::size_t c) {
  assert(shape_.size() == 2 && r < shape_[0] && c < shape_[1]);
  return data_[r * shape_[1] + c];
}

double Tensor::at(std::size_t r, std::size_t c) const {
  assert(shape_.size() == 2 && r < shape_[0] && c < shape_[1]);
  return data_[r * shape_[1] + c];
}

double Tensor::item() const {
  if (data_.size() != 1) {
    throw std::invalid_argument(fmt::format(
        "item() needs a one-element tensor, shape is {}", shape_string(shape_)));
  }
  return data_[0];
}

Tensor Tensor::reshaped(Shape shape) const {
  if (shape_numel(shape) != data_.size()) {
    throw std::invalid_argument(fmt::format("cannot reshape {} to {}",
                                            shape_string(shape_),
                                            shape_string(shape)));
  }
  Tensor out;
  out.shape_ = std::move(shape);
  out.data_ = data_;
  return out;
}

bool Tensor::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

void Tensor::require_finite(const char* where) const {
  if (!all_finite()) {
    throw std::domain_error(
        fmt::format("non-finite value in {} (shape {})", where,
                    shape_string(shape_)));
  }
}

void Tensor::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

}  // namespace fdetr
