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

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace fdetr::detail {

/// One axis of an align-corners-false bilinear lookup. `coord` is normalized
/// so that pixel p has its center at (p + 0.5) / extent.
struct AxisTap {
  std::size_t lo = 0;
  std::size_t hi = 0;
  double frac = 0.0;
  /// d(pixel coordinate)/d(normalized coordinate); 0 where clamped.
  double slope = 0.0;
};

inline AxisTap axis_tap(double coord, std::size_t extent) {
  const double last = static_cast<double>(extent - 1);
  double px = coord * static_cast<double>(extent) - 0.5;
  double slope = static_cast<double>(extent);
  if (px < 0.0) {
    px = 0.0;
    slope = 0.0;
  } else if (px > last) {
    px = last;
    slope = 0.0;
  }
  AxisTap tap;
  tap.lo = static_cast<std::size_t>(std::floor(px));
  tap.hi = std::min(tap.lo + 1, extent - 1);
  tap.frac = px - static_cast<double>(tap.lo);
  tap.slope = slope;
  return tap;
}

/// Bilinear stencil over an [H×W×C] map at normalized (x, y). Reads `depth`
/// consecutive channels per pixel (depth ≤ channels) starting at the map
/// pointer handed to the gather/scatter helpers.
struct Stencil {
  AxisTap x;
  AxisTap y;
  std::size_t width = 0;
  std::size_t channels = 0;
  std::size_t depth = 0;

  std::size_t offset(std::size_t row, std::size_t col) const {
    return (row * width + col) * channels;
  }
  double w00() const { return (1.0 - y.frac) * (1.0 - x.frac); }
  double w01() const { return (1.0 - y.frac) * x.frac; }
  double w10() const { return y.frac * (1.0 - x.frac); }
  double w11() const { return y.frac * x.frac; }
};

inline Stencil make_stencil(double x, double y, std::size_t height,
                            std::size_t width, std::size_t channels,
                            std::size_t depth) {
  return Stencil{axis_tap(x, width), axis_tap(y, height), width, channels, depth};
}
inline Stencil make_stencil(double x, double y, std::size_t height,
                            std::size_t width, std::size_t channels) {
  return make_stencil(x, y, height, width, channels, channels);
}

/// out[c] += scale * sample(map, stencil)[c]
inline void stencil_gather(const Stencil& s, const double* map, double scale,
                           double* out) {
  const double* p00 = map + s.offset(s.y.lo, s.x.lo);
  const double* p01 = map + s.offset(s.y.lo, s.x.hi);
  const double* p10 = map + s.offset(s.y.hi, s.x.lo);
  const double* p11 = map + s.offset(s.y.hi, s.x.hi);
  const double a = scale * s.w00(), b = scale * s.w01();
  const double c = scale * s.w10(), d = scale * s.w11();
  for (std::size_t ch = 0; ch < s.depth; ++ch) {
    out[ch] += a * p00[ch] + b * p01[ch] + c * p10[ch] + d * p11[ch];
  }
}

/// map_grad += scale * outer(stencil weights, grad)
inline void stencil_scatter(const Stencil& s, const double* grad, double scale,
                            double* map_grad) {
  double* p00 = map_grad + s.offset(s.y.lo, s.x.lo);
  double* p01 = map_grad + s.offset(s.y.lo, s.x.hi);
  double* p10 = map_grad + s.offset(s.y.hi, s.x.lo);
  double* p11 = map_grad + s.offset(s.y.hi, s.x.hi);
  const double a = scale * s.w00(), b = scale * s.w01();
  const double c = scale * s.w10(), d = scale * s.w11();
  for (std::size_t ch = 0; ch < s.depth; ++ch) {
    p00[ch] += a * grad[ch];
    p01[ch] += b * grad[ch];
    p10[ch] += c * grad[ch];
    p11[ch] += d * grad[ch];
  }
}

/// Gradient of <grad, scale * sample(map, stencil)> with respect to the
/// normalized coordinates, accumulated into (gx, gy).
inline void stencil_coord_grad(const Stencil& s, const double* map,
                               const double* grad, double scale, double& gx,
                               double& gy) {
  const double* p00 = map + s.offset(s.y.lo, s.x.lo);
  const double* p01 = map + s.offset(s.y.lo, s.x.hi);
  const double* p10 = map + s.offset(s.y.hi, s.x.lo);
  const double* p11 = map + s.offset(s.y.hi, s.x.hi);
  double dfx = 0.0, dfy = 0.0;
  for (std::size_t ch = 0; ch < s.depth; ++ch) {
    dfx += grad[ch] * ((1.0 - s.y.frac) * (p01[ch] - p00[ch]) +
                       s.y.frac * (p11[ch] - p10[ch]));
    dfy += grad[ch] * ((1.0 - s.x.frac) * (p10[ch] - p00[ch]) +
                       s.x.frac * (p11[ch] - p01[ch]));
  }
  gx += scale * dfx * s.x.slope;
  gy += scale * dfy * s.y.slope;
}

}  // namespace fdetr::detail
