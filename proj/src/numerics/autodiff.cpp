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

#include "focusdetr/numerics/autodiff.hpp"

#include <stdexcept>

#include <fmt/format.h>

namespace fdetr {

Parameter::Parameter(std::string name_, Tensor value_)
    : name(std::move(name_)), value(std::move(value_)), grad(value.shape()) {}

const Tensor& Var::value() const { return tape_->node(*this).value; }

bool Var::requires_grad() const { return tape_->node(*this).requires_grad; }

bool Var::valid() const {
  return tape_ != nullptr && generation_ == tape_->generation_ &&
         id_ < tape_->nodes_.size();
}

const Tape::Node& Tape::node(const Var& v) const {
  if (!v.valid()) {
    throw std::logic_error("use of a Var from a cleared or foreign tape");
  }
  return nodes_[v.id_];
}

Var Tape::constant(Tensor value) {
  value.require_finite("Tape::constant");
  nodes_.push_back(Node{std::move(value), {}, {}, {}, nullptr, false});
  return Var(this, nodes_.size() - 1, generation_);
}

Var Tape::param(Parameter& param) {
  if (param.grad.shape() != param.value.shape()) {
    throw std::logic_error(fmt::format(
        "parameter '{}' gradient shape {} differs from value shape {}",
        param.name, shape_string(param.grad.shape()),
        shape_string(param.value.shape())));
  }
  param.value.require_finite(param.name.c_str());
  nodes_.push_back(Node{param.value, {}, {}, {}, &param, true});
  return Var(this, nodes_.size() - 1, generation_);
}

Var Tape::record(Tensor value, std::vector<Var> inputs, BackwardFn backward) {
#ifndef NDEBUG
  value.require_finite("recorded op");
#endif
  Node n;
  n.value = std::move(value);
  n.inputs.reserve(inputs.size());
  for (const Var& in : inputs) {
    if (&in.tape() != this || !in.valid()) {
      throw std::logic_error("op input belongs to another tape generation");
    }
    n.inputs.push_back(in.id_);
    n.requires_grad = n.requires_grad || nodes_[in.id_].requires_grad;
  }
  if (n.requires_grad) n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return Var(this, nodes_.size() - 1, generation_);
}

void Tape::backward(const Var& loss) {
  const Node& root = node(loss);
  if (root.value.size() != 1) {
    throw std::invalid_argument(fmt::format(
        "backward() needs a scalar loss, got shape {}",
        shape_string(root.value.shape())));
  }
  if (root.requires_grad) {
    nodes_[loss.id_].grad = Tensor::full(root.value.shape(), 1.0);
    std::vector<Tensor*> input_grads;
    for (std::size_t id = loss.id_ + 1; id-- > 0;) {
      Node& n = nodes_[id];
      if (!n.requires_grad || n.grad.size() == 0) continue;
      if (n.param != nullptr) {
        auto dst = n.param->grad.data();
        auto src = n.grad.data();
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
        continue;
      }
      input_grads.clear();
      for (std::size_t in : n.inputs) {
        Node& parent = nodes_[in];
        if (!parent.requires_grad) {
          input_grads.push_back(nullptr);
          continue;
        }
        if (parent.grad.size() != parent.value.size()) {
          parent.grad = Tensor(parent.value.shape());
        }
        input_grads.push_back(&parent.grad);
      }
      n.backward(n.grad, input_grads);
    }
  }
  clear();
}

void Tape::clear() {
  nodes_.clear();
  ++generation_;
}

}  // namespace fdetr
