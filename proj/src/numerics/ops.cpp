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

#include "focusdetr/numerics/ops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_set>

#include <fmt/format.h>

#include "focusdetr/numerics/bilinear.hpp"

namespace fdetr::ops {
namespace {

void require_same_shape(const char* op, const Var& a, const Var& b) {
  if (a.shape() != b.shape()) {
    throw std::invalid_argument(fmt::format("{}: shape mismatch {} vs {}", op,
                                            shape_string(a.shape()),
                                            shape_string(b.shape())));
  }
}

void require_rank(const char* op, const Var& a, std::size_t rank) {
  if (a.shape().size() != rank) {
    throw std::invalid_argument(fmt::format("{}: expected rank {}, got shape {}",
                                            op, rank, shape_string(a.shape())));
  }
}

// Elementwise unary op given f(x) and f'(x, f(x)).
template <typename F, typename DF>
Var unary(const Var& a, F f, DF df) {
  const Tensor& x = a.value();
  Tensor y(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = f(x[i]);
  return a.tape().record(std::move(y), {a},
                         [a, df](const Tensor& g, std::span<Tensor* const> gi) {
                           const Tensor& x = a.value();
                           Tensor& gx = *gi[0];
                           for (std::size_t i = 0; i < x.size(); ++i) {
                             gx[i] += g[i] * df(x[i]);
                           }
                         });
}

void matmul_into(const double* a, const double* b, double* out, std::size_t n,
                 std::size_t d, std::size_t m) {
  for (std::size_t i = 0; i < n; ++i) {
    double* row = out + i * m;
    for (std::size_t k = 0; k < d; ++k) {
      const double aik = a[i * d + k];
      if (aik == 0.0) continue;
      const double* brow = b + k * m;
      for (std::size_t j = 0; j < m; ++j) row[j] += aik * brow[j];
    }
  }
}

double sigmoid_scalar(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

Var add(const Var& a, const Var& b) {
  require_same_shape("add", a, b);
  Tensor y = a.value();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += b.value()[i];
  return a.tape().record(std::move(y), {a, b},
                         [](const Tensor& g, std::span<Tensor* const> gi) {
                           for (Tensor* t : gi) {
                             if (!t) continue;
                             for (std::size_t i = 0; i < g.size(); ++i) (*t)[i] += g[i];
                           }
                         });
}

Var sub(const Var& a, const Var& b) {
  require_same_shape("sub", a, b);
  Tensor y = a.value();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] -= b.value()[i];
  return a.tape().record(std::move(y), {a, b},
                         [](const Tensor& g, std::span<Tensor* const> gi) {
                           if (gi[0]) {
                             for (std::size_t i = 0; i < g.size(); ++i) (*gi[0])[i] += g[i];
                           }
                           if (gi[1]) {
                             for (std::size_t i = 0; i < g.size(); ++i) (*gi[1])[i] -= g[i];
                           }
                         });
}

Var mul(const Var& a, const Var& b) {
  require_same_shape("mul", a, b);
  Tensor y = a.value();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] *= b.value()[i];
  return a.tape().record(std::move(y), {a, b},
                         [a, b](const Tensor& g, std::span<Tensor* const> gi) {
                           const Tensor& av = a.value();
                           const Tensor& bv = b.value();
                           if (gi[0]) {
                             for (std::size_t i = 0; i < g.size(); ++i) (*gi[0])[i] += g[i] * bv[i];
                           }
                           if (gi[1]) {
                             for (std::size_t i = 0; i < g.size(); ++i) (*gi[1])[i] += g[i] * av[i];
                           }
                         });
}

Var scale(const Var& a, double factor) {
  return unary(a, [factor](double x) { return x * factor; },
               [factor](double) { return factor; });
}

Var add_scalar(const Var& a, double offset) {
  return unary(a, [offset](double x) { return x + offset; },
               [](double) { return 1.0; });
}

Var mul_by_scalar(const Var& a, const Var& s) {
  if (s.value().size() != 1) {
    throw std::invalid_argument(fmt::format(
        "mul_by_scalar: scale must have one element, got shape {}",
        shape_string(s.shape())));
  }
  const double k = s.value()[0];
  Tensor y = a.value();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] *= k;
  return a.tape().record(std::move(y), {a, s},
                         [a, s](const Tensor& g, std::span<Tensor* const> gi) {
                           const Tensor& av = a.value();
                           const double k = s.value()[0];
                           if (gi[0]) {
                             for (std::size_t i = 0; i < g.size(); ++i) (*gi[0])[i] += g[i] * k;
                           }
                           if (gi[1]) {
                             double acc = 0.0;
                             for (std::size_t i = 0; i < g.size(); ++i) acc += g[i] * av[i];
                             (*gi[1])[0] += acc;
                           }
                         });
}

Var matmul(const Var& a, const Var& b) {
  require_rank("matmul", a, 2);
  require_rank("matmul", b, 2);
  const std::size_t n = a.shape()[0], d = a.shape()[1], m = b.shape()[1];
  if (b.shape()[0] != d) {
    throw std::invalid_argument(fmt::format("matmul: shape mismatch {} x {}",
                                            shape_string(a.shape()),
                                            shape_string(b.shape())));
  }
  Tensor y({n, m});
  matmul_into(a.value().data().data(), b.value().data().data(), y.data().data(),
              n, d, m);
  return a.tape().record(
      std::move(y), {a, b},
      [a, b, n, d, m](const Tensor& g, std::span<Tensor* const> gi) {
        const double* av = a.value().data().data();
        const double* bv = b.value().data().data();
        if (gi[0]) {
          // dA[i][k] += Σ_j g[i][j] b[k][j]
          double* ga = gi[0]->data().data();
          for (std::size_t i = 0; i < n; ++i) {
            const double* grow = g.data().data() + i * m;
            for (std::size_t k = 0; k < d; ++k) {
              const double* brow = bv + k * m;
              double acc = 0.0;
              for (std::size_t j = 0; j < m; ++j) acc += grow[j] * brow[j];
              ga[i * d + k] += acc;
            }
          }
        }
        if (gi[1]) {
          // dB[k][j] += Σ_i a[i][k] g[i][j]
          double* gb = gi[1]->data().data();
          for (std::size_t i = 0; i < n; ++i) {
            const double* grow = g.data().data() + i * m;
            for (std::size_t k = 0; k < d; ++k) {
              const double aik = av[i * d + k];
              if (aik == 0.0) continue;
              double* gbrow = gb + k * m;
              for (std::size_t j = 0; j < m; ++j) gbrow[j] += aik * grow[j];
            }
          }
        }
      });
}

Var add_row(const Var& a, const Var& bias) {
  require_rank("add_row", a, 2);
  const std::size_t n = a.shape()[0], m = a.shape()[1];
  if (bias.value().size() != m) {
    throw std::invalid_argument(fmt::format("add_row: bias shape {} vs rows of {}",
                                            shape_string(bias.shape()),
                                            shape_string(a.shape())));
  }
  Tensor y = a.value();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) y[i * m + j] += bias.value()[j];
  }
  return a.tape().record(std::move(y), {a, bias},
                         [n, m](const Tensor& g, std::span<Tensor* const> gi) {
                           if (gi[0]) {
                             for (std::size_t i = 0; i < g.size(); ++i) (*gi[0])[i] += g[i];
                           }
                           if (gi[1]) {
                             for (std::size_t i = 0; i < n; ++i) {
                               for (std::size_t j = 0; j < m; ++j) (*gi[1])[j] += g[i * m + j];
                             }
                           }
                         });
}

Var transpose(const Var& a) {
  require_rank("transpose", a, 2);
  const std::size_t n = a.shape()[0], m = a.shape()[1];
  Tensor y({m, n});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) y[j * n + i] = a.value()[i * m + j];
  }
  return a.tape().record(std::move(y), {a},
                         [n, m](const Tensor& g, std::span<Tensor* const> gi) {
                           for (std::size_t i = 0; i < n; ++i) {
                             for (std::size_t j = 0; j < m; ++j) (*gi[0])[i * m + j] += g[j * n + i];
                           }
                         });
}

Var reshape(const Var& a, Shape shape) {
  Tensor y = a.value().reshaped(std::move(shape));
  return a.tape().record(std::move(y), {a},
                         [](const Tensor& g, std::span<Tensor* const> gi) {
                           for (std::size_t i = 0; i < g.size(); ++i) (*gi[0])[i] += g[i];
                         });
}

Var sigmoid(const Var& a) {
  return unary(a, sigmoid_scalar, [](double x) {
    const double s = sigmoid_scalar(x);
    return s * (1.0 - s);
  });
}

Var relu(const Var& a) {
  return unary(a, [](double x) { return x > 0.0 ? x : 0.0; },
               [](double x) { return x > 0.0 ? 1.0 : 0.0; });
}

Var gelu(const Var& a) {
  constexpr double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  return unary(
      a, [](double x) { return 0.5 * x * (1.0 + std::erf(x * inv_sqrt2)); },
      [inv_sqrt_2pi](double x) {
        const double cdf = 0.5 * (1.0 + std::erf(x * inv_sqrt2));
        return cdf + x * inv_sqrt_2pi * std::exp(-0.5 * x * x);
      });
}

Var log(const Var& a) {
  for (double v : a.value().data()) {
    if (!(v > 0.0)) throw std::domain_error("log: non-positive input");
  }
  return unary(a, [](double x) { return std::log(x); },
               [](double x) { return 1.0 / x; });
}

Var softmax(const Var& a, std::size_t axis) {
  const Shape& shape = a.shape();
  if (axis >= shape.size()) {
    throw std::invalid_argument(fmt::format("softmax: axis {} out of range for {}",
                                            axis, shape_string(shape)));
  }
  std::size_t outer = 1, inner = 1;
  for (std::size_t d = 0; d < axis; ++d) outer *= shape[d];
  for (std::size_t d = axis + 1; d < shape.size(); ++d) inner *= shape[d];
  const std::size_t len = shape[axis];
  const Tensor& x = a.value();
  Tensor y(shape);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t in = 0; in < inner; ++in) {
      const std::size_t base = o * len * inner + in;
      double mx = x[base];
      for (std::size_t k = 1; k < len; ++k) mx = std::max(mx, x[base + k * inner]);
      double total = 0.0;
      for (std::size_t k = 0; k < len; ++k) {
        const double e = std::exp(x[base + k * inner] - mx);
        y[base + k * inner] = e;
        total += e;
      }
      for (std::size_t k = 0; k < len; ++k) y[base + k * inner] /= total;
    }
  }
  Tensor saved = y;
  return a.tape().record(
      std::move(y), {a},
      [saved = std::move(saved), outer, inner, len](const Tensor& g,
                                                    std::span<Tensor* const> gi) {
        Tensor& gx = *gi[0];
        for (std::size_t o = 0; o < outer; ++o) {
          for (std::size_t in = 0; in < inner; ++in) {
            const std::size_t base = o * len * inner + in;
            double dot = 0.0;
            for (std::size_t k = 0; k < len; ++k) {
              dot += g[base + k * inner] * saved[base + k * inner];
            }
            for (std::size_t k = 0; k < len; ++k) {
              const std::size_t idx = base + k * inner;
              gx[idx] += saved[idx] * (g[idx] - dot);
            }
          }
        }
      });
}

Var row_scale(const Var& a, const Var& factor) {
  require_rank("row_scale", a, 2);
  const std::size_t n = a.shape()[0], c = a.shape()[1];
  if (factor.value().size() != n) {
    throw std::invalid_argument(fmt::format("row_scale: factor shape {} vs {}",
                                            shape_string(factor.shape()),
                                            shape_string(a.shape())));
  }
  Tensor y = a.value();
  for (std::size_t i = 0; i < n; ++i) {
    const double f = factor.value()[i];
    for (std::size_t j = 0; j < c; ++j) y[i * c + j] *= f;
  }
  return a.tape().record(
      std::move(y), {a, factor},
      [a, factor, n, c](const Tensor& g, std::span<Tensor* const> gi) {
        const Tensor& av = a.value();
        const Tensor& fv = factor.value();
        for (std::size_t i = 0; i < n; ++i) {
          double acc = 0.0;
          for (std::size_t j = 0; j < c; ++j) {
            const std::size_t idx = i * c + j;
            if (gi[0]) (*gi[0])[idx] += g[idx] * fv[i];
            acc += g[idx] * av[idx];
          }
          if (gi[1]) (*gi[1])[i] += acc;
        }
      });
}

Var row_max(const Var& a) {
  require_rank("row_max", a, 2);
  const std::size_t n = a.shape()[0], k = a.shape()[1];
  if (k == 0) throw std::invalid_argument("row_max: empty rows");
  Tensor y({n});
  std::vector<std::size_t> arg(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    double best = a.value()[i * k];
    for (std::size_t j = 1; j < k; ++j) {
      if (a.value()[i * k + j] > best) {
        best = a.value()[i * k + j];
        arg[i] = j;
      }
    }
    y[i] = best;
  }
  return a.tape().record(std::move(y), {a},
                         [arg = std::move(arg), k](const Tensor& g,
                                                   std::span<Tensor* const> gi) {
                           for (std::size_t i = 0; i < arg.size(); ++i) {
                             (*gi[0])[i * k + arg[i]] += g[i];
                           }
                         });
}

namespace {

std::size_t row_width(const char* op, const Var& a) {
  if (a.shape().size() == 1) return 1;
  if (a.shape().size() == 2) return a.shape()[1];
  throw std::invalid_argument(fmt::format("{}: expected rank 1 or 2, got {}", op,
                                          shape_string(a.shape())));
}

}  // namespace

Var gather_rows(const Var& a, std::span<const std::size_t> index) {
  const std::size_t c = row_width("gather_rows", a);
  const std::size_t n = a.shape()[0];
  Shape out_shape = a.shape();
  out_shape[0] = index.size();
  Tensor y(out_shape);
  for (std::size_t r = 0; r < index.size(); ++r) {
    if (index[r] >= n) {
      throw std::out_of_range(fmt::format("gather_rows: index {} >= {}", index[r], n));
    }
    std::copy_n(a.value().data().begin() + static_cast<std::ptrdiff_t>(index[r] * c), c,
                y.data().begin() + static_cast<std::ptrdiff_t>(r * c));
  }
  std::vector<std::size_t> idx(index.begin(), index.end());
  return a.tape().record(std::move(y), {a},
                         [idx = std::move(idx), c](const Tensor& g,
                                                   std::span<Tensor* const> gi) {
                           for (std::size_t r = 0; r < idx.size(); ++r) {
                             for (std::size_t j = 0; j < c; ++j) {
                               (*gi[0])[idx[r] * c + j] += g[r * c + j];
                             }
                           }
                         });
}

Var scatter_rows(const Var& base, std::span<const std::size_t> index,
                 const Var& rows) {
  const std::size_t c = row_width("scatter_rows", base);
  const std::size_t n = base.shape()[0];
  if (rows.shape().empty() || rows.shape()[0] != index.size() ||
      row_width("scatter_rows", rows) != c) {
    throw std::invalid_argument(fmt::format(
        "scatter_rows: {} rows of shape {} into {}", index.size(),
        shape_string(rows.shape()), shape_string(base.shape())));
  }
  std::unordered_set<std::size_t> seen;
  for (std::size_t i : index) {
    if (i >= n) throw std::out_of_range(fmt::format("scatter_rows: index {} >= {}", i, n));
    if (!seen.insert(i).second) {
      throw std::invalid_argument(fmt::format("scatter_rows: duplicate index {}", i));
    }
  }
  Tensor y = base.value();
  for (std::size_t r = 0; r < index.size(); ++r) {
    std::copy_n(rows.value().data().begin() + static_cast<std::ptrdiff_t>(r * c), c,
                y.data().begin() + static_cast<std::ptrdiff_t>(index[r] * c));
  }
  std::vector<std::size_t> idx(index.begin(), index.end());
  return base.tape().record(
      std::move(y), {base, rows},
      [idx = std::move(idx), c, n](const Tensor& g, std::span<Tensor* const> gi) {
        if (gi[0]) {
          std::vector<bool> replaced(n, false);
          for (std::size_t i : idx) replaced[i] = true;
          for (std::size_t i = 0; i < n; ++i) {
            if (replaced[i]) continue;
            for (std::size_t j = 0; j < c; ++j) (*gi[0])[i * c + j] += g[i * c + j];
          }
        }
        if (gi[1]) {
          for (std::size_t r = 0; r < idx.size(); ++r) {
            for (std::size_t j = 0; j < c; ++j) (*gi[1])[r * c + j] += g[idx[r] * c + j];
          }
        }
      });
}

Var slice_cols(const Var& a, std::size_t start, std::size_t count) {
  require_rank("slice_cols", a, 2);
  const std::size_t n = a.shape()[0], m = a.shape()[1];
  if (start + count > m) {
    throw std::out_of_range(fmt::format("slice_cols: [{}, {}) exceeds {} columns",
                                        start, start + count, m));
  }
  Tensor y({n, count});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < count; ++j) y[i * count + j] = a.value()[i * m + start + j];
  }
  return a.tape().record(std::move(y), {a},
                         [n, m, start, count](const Tensor& g,
                                              std::span<Tensor* const> gi) {
                           for (std::size_t i = 0; i < n; ++i) {
                             for (std::size_t j = 0; j < count; ++j) {
                               (*gi[0])[i * m + start + j] += g[i * count + j];
                             }
                           }
                         });
}

Var concat_cols(std::span<const Var> parts) {
  if (parts.empty()) throw std::invalid_argument("concat_cols: no inputs");
  const std::size_t n = parts[0].shape().at(0);
  std::size_t total = 0;
  std::vector<std::size_t> widths;
  for (const Var& p : parts) {
    require_rank("concat_cols", p, 2);
    if (p.shape()[0] != n) {
      throw std::invalid_argument("concat_cols: row count mismatch");
    }
    widths.push_back(p.shape()[1]);
    total += p.shape()[1];
  }
  Tensor y({n, total});
  std::size_t col = 0;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const Tensor& v = parts[p].value();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < widths[p]; ++j) y[i * total + col + j] = v[i * widths[p] + j];
    }
    col += widths[p];
  }
  return parts[0].tape().record(
      std::move(y), std::vector<Var>(parts.begin(), parts.end()),
      [widths, n, total](const Tensor& g, std::span<Tensor* const> gi) {
        std::size_t col = 0;
        for (std::size_t p = 0; p < widths.size(); ++p) {
          if (gi[p]) {
            for (std::size_t i = 0; i < n; ++i) {
              for (std::size_t j = 0; j < widths[p]; ++j) {
                (*gi[p])[i * widths[p] + j] += g[i * total + col + j];
              }
            }
          }
          col += widths[p];
        }
      });
}

Var sum(const Var& a) {
  double acc = 0.0;
  for (double v : a.value().data()) acc += v;
  return a.tape().record(Tensor::scalar(acc), {a},
                         [](const Tensor& g, std::span<Tensor* const> gi) {
                           for (double& v : gi[0]->data()) v += g[0];
                         });
}

Var mean(const Var& a) {
  const std::size_t n = a.value().size();
  if (n == 0) throw std::invalid_argument("mean: empty tensor");
  return scale(sum(a), 1.0 / static_cast<double>(n));
}

Var weighted_sum(const Var& a, const Tensor& weights) {
  if (weights.size() != a.value().size()) {
    throw std::invalid_argument(fmt::format("weighted_sum: {} weights for shape {}",
                                            weights.size(), shape_string(a.shape())));
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) acc += a.value()[i] * weights[i];
  return a.tape().record(Tensor::scalar(acc), {a},
                         [weights](const Tensor& g, std::span<Tensor* const> gi) {
                           for (std::size_t i = 0; i < weights.size(); ++i) {
                             (*gi[0])[i] += g[0] * weights[i];
                           }
                         });
}

Var bilinear_upsample(const Var& a, std::size_t out_h, std::size_t out_w) {
  require_rank("bilinear_upsample", a, 2);
  const std::size_t h = a.shape()[0], w = a.shape()[1];
  if (out_h == 0 || out_w == 0 || h == 0 || w == 0) {
    throw std::invalid_argument(fmt::format(
        "bilinear_upsample: zero-sized map {} -> [{}, {}]", shape_string(a.shape()),
        out_h, out_w));
  }
  if (out_h < h || out_w < w) {
    throw std::invalid_argument(fmt::format(
        "bilinear_upsample: target [{}, {}] smaller than source {}", out_h, out_w,
        shape_string(a.shape())));
  }
  std::vector<detail::Stencil> stencils;
  stencils.reserve(out_h * out_w);
  Tensor y({out_h, out_w});
  for (std::size_t r = 0; r < out_h; ++r) {
    for (std::size_t c = 0; c < out_w; ++c) {
      const double u = (static_cast<double>(c) + 0.5) / static_cast<double>(out_w);
      const double v = (static_cast<double>(r) + 0.5) / static_cast<double>(out_h);
      stencils.push_back(detail::make_stencil(u, v, h, w, 1));
      detail::stencil_gather(stencils.back(), a.value().data().data(), 1.0,
                             &y[r * out_w + c]);
    }
  }
  return a.tape().record(std::move(y), {a},
                         [stencils = std::move(stencils)](const Tensor& g,
                                                          std::span<Tensor* const> gi) {
                           double* dst = gi[0]->data().data();
                           for (std::size_t i = 0; i < stencils.size(); ++i) {
                             detail::stencil_scatter(stencils[i], g.data().data() + i, 1.0, dst);
                           }
                         });
}

Var bilinear_sample(const Var& map, const Var& points) {
  require_rank("bilinear_sample", map, 3);
  require_rank("bilinear_sample", points, 2);
  if (points.shape()[1] != 2) {
    throw std::invalid_argument(fmt::format("bilinear_sample: points must be [P×2], got {}",
                                            shape_string(points.shape())));
  }
  const std::size_t h = map.shape()[0], w = map.shape()[1], c = map.shape()[2];
  if (h == 0 || w == 0) throw std::invalid_argument("bilinear_sample: empty map");
  const std::size_t p = points.shape()[0];
  std::vector<detail::Stencil> stencils;
  stencils.reserve(p);
  Tensor y({p, c});
  for (std::size_t i = 0; i < p; ++i) {
    stencils.push_back(detail::make_stencil(points.value()[2 * i],
                                            points.value()[2 * i + 1], h, w, c));
    detail::stencil_gather(stencils.back(), map.value().data().data(), 1.0,
                           y.data().data() + i * c);
  }
  return map.tape().record(
      std::move(y), {map, points},
      [map, stencils = std::move(stencils), c](const Tensor& g,
                                               std::span<Tensor* const> gi) {
        for (std::size_t i = 0; i < stencils.size(); ++i) {
          const double* grow = g.data().data() + i * c;
          if (gi[0]) detail::stencil_scatter(stencils[i], grow, 1.0, gi[0]->data().data());
          if (gi[1]) {
            detail::stencil_coord_grad(stencils[i], map.value().data().data(), grow, 1.0,
                                       (*gi[1])[2 * i], (*gi[1])[2 * i + 1]);
          }
        }
      });
}

}  // namespace fdetr::ops
