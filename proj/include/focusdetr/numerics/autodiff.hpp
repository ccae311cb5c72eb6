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
#include <deque>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "focusdetr/numerics/tensor.hpp"

namespace fdetr {

/// A trainable tensor plus its accumulated gradient.
struct Parameter {
  Parameter() = default;
  Parameter(std::string name, Tensor value);

  std::string name;
  Tensor value;
  Tensor grad;

  void zero_grad() { grad.fill(0.0); }
};

class Tape;

/// Handle to a node recorded on a Tape. Cheap to copy; only valid until the
/// owning tape is cleared.
class Var {
 public:
  Var() = default;

  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }
  bool requires_grad() const;
  Tape& tape() const { return *tape_; }
  std::size_t id() const { return id_; }
  bool valid() const;

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id, std::uint64_t generation)
      : tape_(tape), id_(id), generation_(generation) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
  std::uint64_t generation_ = 0;
};

/// Receives the gradient of the node's output and adds into the gradients of
/// its inputs. `input_grads[i]` is null when input i does not need a gradient.
using BackwardFn =
    std::function<void(const Tensor& grad_out, std::span<Tensor* const> input_grads)>;

/// Reverse-mode differentiation tape. One tape is one computation scope:
/// record a forward pass, call backward() once, and the tape is cleared.
///
/// Only Parameters receive gradients; constants are leaves without one.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Tensor value);
  /// Leaf bound to `param`; backward() adds into `param.grad`. The parameter
  /// must outlive the tape's current generation.
  Var param(Parameter& param);
  Var record(Tensor value, std::vector<Var> inputs, BackwardFn backward);

  /// Reverse sweep from a one-element `loss`, accumulating into every
  /// reachable Parameter. Clears the tape afterwards.
  void backward(const Var& loss);
  void clear();

  std::size_t size() const { return nodes_.size(); }

 private:
  friend class Var;

  struct Node {
    Tensor value;
    Tensor grad;
    std::vector<std::size_t> inputs;
    BackwardFn backward;
    Parameter* param = nullptr;
    bool requires_grad = false;
  };

  const Node& node(const Var& v) const;

  // deque keeps references to node values stable across push_back.
  std::deque<Node> nodes_;
  std::uint64_t generation_ = 1;
};

}  // namespace fdetr
