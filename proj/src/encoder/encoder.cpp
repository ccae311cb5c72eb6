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

#include "focusdetr/encoder/encoder.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

#include "focusdetr/numerics/ops.hpp"

namespace fdetr::encoder {
namespace {

Tensor gather_tensor_rows(const Tensor& src, const std::vector<std::size_t>& rows) {
  const std::size_t width = src.dim(1);
  Tensor out({rows.size(), width});
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::copy_n(src.data().begin() + rows[r] * width, width, out.data().begin() + r * width);
  }
  return out;
}

}  // namespace

LayerParams LayerParams::init(const EncoderConfig& config, std::size_t levels,
                              std::size_t index, Rng& rng) {
  const std::string prefix = fmt::format("encoder.layer{}", index);
  const std::size_t c = config.channels;
  return LayerParams{
      MhsaParams::init(c, rng, prefix + ".self_attn"),
      Parameter(prefix + ".norm.gain", Tensor::full({c}, 1.0)),
      Parameter(prefix + ".norm.shift", Tensor({c})),
      DeformParams::init(c, config.heads, levels, config.points, rng, prefix + ".deform")};
}

std::vector<Parameter*> LayerParams::parameters() {
  std::vector<Parameter*> out;
  for (auto& p : self_attn.params) out.push_back(&p);
  out.push_back(&norm_gain);
  out.push_back(&norm_shift);
  for (auto& p : deform.params) out.push_back(&p);
  return out;
}

EncoderParams EncoderParams::init(const EncoderConfig& config, std::size_t levels,
                                  std::size_t num_classes, Rng& rng) {
  config.validate();
  EncoderParams p;
  for (std::size_t i = 0; i < config.num_layers; ++i) {
    p.layers.push_back(LayerParams::init(config, levels, i, rng));
  }
  p.head = scoring::CategoryHead::init(config.channels, {config.channels}, num_classes,
                                       Activation::kRelu, rng);
  return p;
}

std::vector<Parameter*> EncoderParams::parameters() {
  std::vector<Parameter*> out;
  for (auto& layer : layers) {
    for (Parameter* p : layer.parameters()) out.push_back(p);
  }
  for (Parameter* p : head.parameters()) out.push_back(p);
  return out;
}

LayerResult dual_attention_layer(TokenWorkspace& ws, LayerParams& layer,
                                 scoring::CategoryHead& head, const EncoderConfig& config) {
  if (config.object_tokens < 1) {
    throw std::invalid_argument("dual_attention_layer: object token count must be at least 1");
  }
  const std::vector<std::size_t>& fg = ws.foreground;
  if (fg.empty()) throw std::invalid_argument("dual_attention_layer: empty foreground set");
  Tape& tape = ws.tokens.tape();
  const Var all_tokens = ws.tokens;

  // Object tokens: top-k of foreground score × best category score. The
  // selection is discrete, so nothing flows back through it.
  Var fg_tokens = ops::gather_rows(all_tokens, fg);
  const Var object =
      scoring::object_score(tape.constant(ws.foreground_scores), fg_tokens, head);
  const std::size_t k = std::min(config.object_tokens, fg.size());
  const std::vector<std::size_t> idx = topk_select(object.value().data(), k);

  // Self-attention enhancement with q = k = tokens + position, v = tokens.
  std::vector<std::size_t> object_flat(k);
  for (std::size_t i = 0; i < k; ++i) object_flat[i] = fg[idx[i]];
  const Var obj_tokens = ops::gather_rows(fg_tokens, idx);
  const Var qk = ops::add(obj_tokens, tape.constant(gather_tensor_rows(ws.pos_embed, object_flat)));
  const Var attended = mhsa(qk, qk, obj_tokens, layer.self_attn, config.heads);
  const Var enhanced =
      layer_norm(ops::add(obj_tokens, attended), layer.norm_gain, layer.norm_shift);
  fg_tokens = ops::scatter_rows(fg_tokens, idx, enhanced);

  // Deformable attention: enhanced foreground rows query the pre-layer field.
  const DeformOutput deform = ms_deform_attn(fg_tokens, gather_tensor_rows(ws.ref_points, fg),
                                             all_tokens, ws.geometry, layer.deform);
  ws.tokens = ops::scatter_rows(all_tokens, fg, deform.output);
  return {LayerTrace{fg, std::move(object_flat)}, deform.weights};
}

EncoderTrace encoder_forward(TokenWorkspace& ws, EncoderParams& params,
                             const EncoderConfig& config) {
  config.validate();
  if (ws.geometry.channels() != config.channels) {
    throw std::invalid_argument(fmt::format("encoder_forward: workspace has {} channels, config {}",
                                            ws.geometry.channels(), config.channels));
  }
  if (params.layers.size() < config.num_layers) {
    throw std::invalid_argument(fmt::format("encoder_forward: {} layer params for {} layers",
                                            params.layers.size(), config.num_layers));
  }
  EncoderTrace trace;
  for (std::size_t layer = 0; layer < config.num_layers; ++layer) {
    select_foreground(ws, layer, config);
    trace.layers.push_back(
        dual_attention_layer(ws, params.layers[layer], params.head, config).trace);
  }
  return trace;
}

}  // namespace fdetr::encoder
