// Copyright 2026 The axnas Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "axnas/tensor/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "axnas/errors.hpp"
#include "axnas/tensor/profile.hpp"

namespace axnas::ops {
namespace {

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(op) + ": shape mismatch " +
                     shape_string(a.shape()) + " vs " + shape_string(b.shape()));
  }
}

void require_nchw(const Tensor& x, const char* op) {
  if (x.rank() != 4) {
    throw ShapeError(std::string(op) + " expects NCHW, got " +
                     shape_string(x.shape()));
  }
}

void record_elementwise(profile::LayerKind kind, const Tensor& x,
                        const Shape& out, int window = 0) {
  if (profile::recording()) {
    profile::record({kind, x.shape(), out, {}, 1, window, false});
  }
}

}  // namespace

Tensor relu(const Tensor& x) {
  std::vector<double> out(x.numel());
  auto xd = x.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = xd[i] > 0.0 ? xd[i] : 0.0;
  record_elementwise(profile::LayerKind::kRelu, x, x.shape());
  return detail::make_result(
      x.shape(), std::move(out), {x},
      [x](std::span<const double> gy) {
        Tensor in = x;
        auto g = in.grad();
        auto xd = in.data();
        for (std::size_t i = 0; i < g.size(); ++i) {
          if (xd[i] > 0.0) g[i] += gy[i];
        }
      },
      "relu");
}

Tensor add(const Tensor& a, const Tensor& b) { return add_n({a, b}); }

Tensor add_n(const std::vector<Tensor>& xs) {
  if (xs.empty()) throw ShapeError("add_n: no inputs");
  for (const auto& x : xs) require_same_shape(xs.front(), x, "add");
  std::vector<double> out(xs.front().data().begin(), xs.front().data().end());
  for (std::size_t k = 1; k < xs.size(); ++k) {
    auto d = xs[k].data();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += d[i];
  }
  if (profile::recording() && xs.size() > 1) {
    profile::record({profile::LayerKind::kAdd, xs.front().shape(),
                     xs.front().shape(), {}, 1, static_cast<int>(xs.size()), false});
  }
  return detail::make_result(
      xs.front().shape(), std::move(out), xs,
      [xs](std::span<const double> gy) {
        for (auto x : xs) {
          if (!detail::wants_grad(x)) continue;
          auto g = x.grad();
          for (std::size_t i = 0; i < g.size(); ++i) g[i] += gy[i];
        }
      },
      "add_n");
}

Tensor scale(const Tensor& x, double s) {
  std::vector<double> out(x.numel());
  auto xd = x.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = s * xd[i];
  return detail::make_result(
      x.shape(), std::move(out), {x},
      [x, s](std::span<const double> gy) {
        Tensor in = x;
        auto g = in.grad();
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += s * gy[i];
      },
      "scale");
}

Tensor weighted_sum(const std::vector<Tensor>& xs, const Tensor& weights) {
  if (xs.empty() || weights.rank() != 1 ||
      static_cast<std::size_t>(weights.dim(0)) != xs.size()) {
    throw ShapeError("weighted_sum: need one weight per input");
  }
  for (const auto& x : xs) require_same_shape(xs.front(), x, "weighted_sum");
  std::vector<double> out(xs.front().numel(), 0.0);
  auto w = weights.data();
  for (std::size_t k = 0; k < xs.size(); ++k) {
    auto d = xs[k].data();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += w[k] * d[i];
  }
  std::vector<Tensor> inputs = xs;
  inputs.push_back(weights);
  return detail::make_result(
      xs.front().shape(), std::move(out), inputs,
      [xs, weights](std::span<const double> gy) {
        Tensor wt = weights;
        auto w = wt.data();
        for (std::size_t k = 0; k < xs.size(); ++k) {
          Tensor x = xs[k];
          if (detail::wants_grad(x)) {
            auto g = x.grad();
            for (std::size_t i = 0; i < g.size(); ++i) g[i] += w[k] * gy[i];
          }
          if (detail::wants_grad(wt)) {
            auto d = x.data();
            double s = 0.0;
            for (std::size_t i = 0; i < d.size(); ++i) s += d[i] * gy[i];
            wt.grad()[k] += s;
          }
        }
      },
      "weighted_sum");
}

Tensor select_row(const Tensor& m, int r) {
  if (m.rank() != 2 || r < 0 || r >= m.dim(0)) {
    throw ShapeError("select_row: row " + std::to_string(r) + " of " +
                     shape_string(m.shape()));
  }
  const int cols = m.dim(1);
  auto d = m.data().subspan(static_cast<std::size_t>(r) * cols, cols);
  return detail::make_result(
      {cols}, std::vector<double>(d.begin(), d.end()), {m},
      [m, r, cols](std::span<const double> gy) {
        Tensor in = m;
        auto g = in.grad().subspan(static_cast<std::size_t>(r) * cols, cols);
        for (int i = 0; i < cols; ++i) g[i] += gy[i];
      },
      "select_row");
}

Tensor softmax(const Tensor& logits) {
  if (logits.rank() != 1) throw ShapeError("softmax expects a 1-D tensor");
  auto z = logits.data();
  const double mx = *std::max_element(z.begin(), z.end());
  std::vector<double> p(z.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::exp(z[i] - mx);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  std::vector<double> saved = p;
  return detail::make_result(
      logits.shape(), std::move(p), {logits},
      [logits, saved](std::span<const double> gy) {
        Tensor in = logits;
        double dot = 0.0;
        for (std::size_t i = 0; i < saved.size(); ++i) dot += saved[i] * gy[i];
        auto g = in.grad();
        for (std::size_t i = 0; i < saved.size(); ++i) {
          g[i] += saved[i] * (gy[i] - dot);
        }
      },
      "softmax");
}

Tensor batch_norm(const Tensor& x, Tensor& running_mean, Tensor& running_var,
                  const Tensor& gamma, const Tensor& beta,
                  const BatchNormOptions& opt) {
  require_nchw(x, "batch_norm");
  const int N = x.dim(0), C = x.dim(1), HW = x.dim(2) * x.dim(3);
  if (running_mean.numel() != static_cast<std::size_t>(C) ||
      running_var.numel() != static_cast<std::size_t>(C)) {
    throw ShapeError("batch_norm: running statistics do not match channels");
  }
  const double count = static_cast<double>(N) * HW;
  std::vector<double> mean(C), inv_std(C);
  auto xd = x.data();
  if (opt.training) {
    for (int c = 0; c < C; ++c) {
      double s = 0.0;
      for (int n = 0; n < N; ++n) {
        const double* p = xd.data() + (static_cast<std::size_t>(n) * C + c) * HW;
        for (int i = 0; i < HW; ++i) s += p[i];
      }
      const double m = s / count;
      double v = 0.0;
      for (int n = 0; n < N; ++n) {
        const double* p = xd.data() + (static_cast<std::size_t>(n) * C + c) * HW;
        for (int i = 0; i < HW; ++i) v += (p[i] - m) * (p[i] - m);
      }
      const double var = v / count;
      mean[c] = m;
      inv_std[c] = 1.0 / std::sqrt(var + opt.eps);
      const double unbiased = count > 1 ? v / (count - 1) : var;
      auto rm = running_mean.data();
      auto rv = running_var.data();
      rm[c] = (1.0 - opt.momentum) * rm[c] + opt.momentum * m;
      rv[c] = (1.0 - opt.momentum) * rv[c] + opt.momentum * unbiased;
    }
  } else {
    auto rm = running_mean.data();
    auto rv = running_var.data();
    for (int c = 0; c < C; ++c) {
      mean[c] = rm[c];
      inv_std[c] = 1.0 / std::sqrt(rv[c] + opt.eps);
    }
  }
  std::vector<double> xhat(x.numel());
  std::vector<double> out(x.numel());
  const bool affine = gamma.defined();
  for (int n = 0; n < N; ++n) {
    for (int c = 0; c < C; ++c) {
      const std::size_t off = (static_cast<std::size_t>(n) * C + c) * HW;
      const double gm = affine ? gamma.at(c) : 1.0;
      const double bt = beta.defined() ? beta.at(c) : 0.0;
      for (int i = 0; i < HW; ++i) {
        xhat[off + i] = (xd[off + i] - mean[c]) * inv_std[c];
        out[off + i] = gm * xhat[off + i] + bt;
      }
    }
  }
  record_elementwise(profile::LayerKind::kBatchNorm, x, x.shape());
  const bool training = opt.training;
  return detail::make_result(
      x.shape(), std::move(out), {x, gamma, beta},
      [x, gamma, beta, xhat = std::move(xhat), inv_std, N, C, HW, count,
       training](std::span<const double> gy) {
        Tensor in = x, gm = gamma, bt = beta;
        for (int c = 0; c < C; ++c) {
          double sum_dy = 0.0, sum_dy_xhat = 0.0;
          for (int n = 0; n < N; ++n) {
            const std::size_t off = (static_cast<std::size_t>(n) * C + c) * HW;
            for (int i = 0; i < HW; ++i) {
              sum_dy += gy[off + i];
              sum_dy_xhat += gy[off + i] * xhat[off + i];
            }
          }
          if (detail::wants_grad(gm)) gm.grad()[c] += sum_dy_xhat;
          if (detail::wants_grad(bt)) bt.grad()[c] += sum_dy;
          if (!detail::wants_grad(in)) continue;
          const double g = gm.defined() ? gm.at(c) : 1.0;
          auto gx = in.grad();
          for (int n = 0; n < N; ++n) {
            const std::size_t off = (static_cast<std::size_t>(n) * C + c) * HW;
            for (int i = 0; i < HW; ++i) {
              if (training) {
                gx[off + i] += g * inv_std[c] *
                               (gy[off + i] - sum_dy / count -
                                xhat[off + i] * sum_dy_xhat / count);
              } else {
                gx[off + i] += g * inv_std[c] * gy[off + i];
              }
            }
          }
        }
      },
      "batch_norm");
}

Tensor max_pool2d(const Tensor& x, int kernel, int stride, int padding) {
  require_nchw(x, "max_pool2d");
  const int N = x.dim(0), C = x.dim(1), H = x.dim(2), W = x.dim(3);
  const int OH = conv_out_size(H, kernel, stride, padding, 1);
  const int OW = conv_out_size(W, kernel, stride, padding, 1);
  Shape shape{N, C, OH, OW};
  std::vector<double> out(shape_numel(shape));
  std::vector<std::size_t> argmax(out.size());
  auto xd = x.data();
  for (int nc = 0; nc < N * C; ++nc) {
    const std::size_t in_off = static_cast<std::size_t>(nc) * H * W;
    for (int oy = 0; oy < OH; ++oy) {
      for (int ox = 0; ox < OW; ++ox) {
        double best = -std::numeric_limits<double>::infinity();
        std::size_t best_i = in_off;
        for (int ky = 0; ky < kernel; ++ky) {
          const int iy = oy * stride - padding + ky;
          if (iy < 0 || iy >= H) continue;
          for (int kx = 0; kx < kernel; ++kx) {
            const int ix = ox * stride - padding + kx;
            if (ix < 0 || ix >= W) continue;
            const std::size_t i = in_off + iy * W + ix;
            if (xd[i] > best) {
              best = xd[i];
              best_i = i;
            }
          }
        }
        const std::size_t o = (static_cast<std::size_t>(nc) * OH + oy) * OW + ox;
        out[o] = best;
        argmax[o] = best_i;
      }
    }
  }
  record_elementwise(profile::LayerKind::kMaxPool, x, shape, kernel * kernel);
  return detail::make_result(
      shape, std::move(out), {x},
      [x, argmax = std::move(argmax)](std::span<const double> gy) {
        Tensor in = x;
        auto g = in.grad();
        for (std::size_t o = 0; o < argmax.size(); ++o) g[argmax[o]] += gy[o];
      },
      "max_pool2d");
}

Tensor avg_pool2d(const Tensor& x, int kernel, int stride, int padding) {
  require_nchw(x, "avg_pool2d");
  const int N = x.dim(0), C = x.dim(1), H = x.dim(2), W = x.dim(3);
  const int OH = conv_out_size(H, kernel, stride, padding, 1);
  const int OW = conv_out_size(W, kernel, stride, padding, 1);
  Shape shape{N, C, OH, OW};
  std::vector<double> out(shape_numel(shape));
  auto xd = x.data();
  auto window = [=](int o, int in_size, int& lo, int& hi) {
    lo = std::max(o * stride - padding, 0);
    hi = std::min(o * stride - padding + kernel, in_size);
  };
  for (int nc = 0; nc < N * C; ++nc) {
    const std::size_t in_off = static_cast<std::size_t>(nc) * H * W;
    for (int oy = 0; oy < OH; ++oy) {
      int y0, y1;
      window(oy, H, y0, y1);
      for (int ox = 0; ox < OW; ++ox) {
        int x0, x1;
        window(ox, W, x0, x1);
        double s = 0.0;
        for (int iy = y0; iy < y1; ++iy)
          for (int ix = x0; ix < x1; ++ix) s += xd[in_off + iy * W + ix];
        out[(static_cast<std::size_t>(nc) * OH + oy) * OW + ox] =
            s / static_cast<double>((y1 - y0) * (x1 - x0));
      }
    }
  }
  record_elementwise(profile::LayerKind::kAvgPool, x, shape, kernel * kernel);
  return detail::make_result(
      shape, std::move(out), {x},
      [x, window, N, C, H, W, OH, OW](std::span<const double> gy) {
        Tensor in = x;
        auto g = in.grad();
        for (int nc = 0; nc < N * C; ++nc) {
          const std::size_t in_off = static_cast<std::size_t>(nc) * H * W;
          for (int oy = 0; oy < OH; ++oy) {
            int y0, y1;
            window(oy, H, y0, y1);
            for (int ox = 0; ox < OW; ++ox) {
              int x0, x1;
              window(ox, W, x0, x1);
              const double share =
                  gy[(static_cast<std::size_t>(nc) * OH + oy) * OW + ox] /
                  static_cast<double>((y1 - y0) * (x1 - x0));
              for (int iy = y0; iy < y1; ++iy)
                for (int ix = x0; ix < x1; ++ix) g[in_off + iy * W + ix] += share;
            }
          }
        }
      },
      "avg_pool2d");
}

Tensor zeros_strided(const Tensor& x, int stride) {
  require_nchw(x, "zero");
  if (stride < 1) throw ShapeError("zero: stride must be >= 1");
  Shape shape{x.dim(0), x.dim(1), (x.dim(2) + stride - 1) / stride,
              (x.dim(3) + stride - 1) / stride};
  std::vector<double> out(shape_numel(shape), 0.0);
  return detail::make_result(
      shape, std::move(out), {x},
      [x](std::span<const double>) {
        Tensor in = x;
        in.grad();  // materialize as zeros
      },
      "zero");
}

Tensor concat_channels(const std::vector<Tensor>& xs) {
  if (xs.empty()) throw ShapeError("concat: no inputs");
  const int N = xs.front().dim(0), H = xs.front().dim(2), W = xs.front().dim(3);
  int C = 0;
  for (const auto& x : xs) {
    require_nchw(x, "concat");
    if (x.dim(0) != N || x.dim(2) != H || x.dim(3) != W) {
      throw ShapeError("concat: spatial/batch mismatch " + shape_string(x.shape()) +
                       " vs " + shape_string(xs.front().shape()));
    }
    C += x.dim(1);
  }
  const std::size_t HW = static_cast<std::size_t>(H) * W;
  Shape shape{N, C, H, W};
  std::vector<double> out(shape_numel(shape));
  for (int n = 0; n < N; ++n) {
    std::size_t dst = static_cast<std::size_t>(n) * C * HW;
    for (const auto& x : xs) {
      const std::size_t len = static_cast<std::size_t>(x.dim(1)) * HW;
      auto d = x.data().subspan(static_cast<std::size_t>(n) * len, len);
      std::copy(d.begin(), d.end(), out.begin() + static_cast<std::ptrdiff_t>(dst));
      dst += len;
    }
  }
  return detail::make_result(
      shape, std::move(out), xs,
      [xs, N, C, HW](std::span<const double> gy) {
        for (int n = 0; n < N; ++n) {
          std::size_t src = static_cast<std::size_t>(n) * C * HW;
          for (auto x : xs) {
            const std::size_t len = static_cast<std::size_t>(x.dim(1)) * HW;
            if (detail::wants_grad(x)) {
              auto g = x.grad().subspan(static_cast<std::size_t>(n) * len, len);
              for (std::size_t i = 0; i < len; ++i) g[i] += gy[src + i];
            }
            src += len;
          }
        }
      },
      "concat");
}

Tensor shift_crop(const Tensor& x) {
  require_nchw(x, "shift_crop");
  const int NC = x.dim(0) * x.dim(1), H = x.dim(2), W = x.dim(3);
  std::vector<double> out(x.numel(), 0.0);
  auto xd = x.data();
  for (int nc = 0; nc < NC; ++nc) {
    const std::size_t off = static_cast<std::size_t>(nc) * H * W;
    for (int y = 0; y + 1 < H; ++y)
      for (int xx = 0; xx + 1 < W; ++xx)
        out[off + y * W + xx] = xd[off + (y + 1) * W + xx + 1];
  }
  return detail::make_result(
      x.shape(), std::move(out), {x},
      [x, NC, H, W](std::span<const double> gy) {
        Tensor in = x;
        auto g = in.grad();
        for (int nc = 0; nc < NC; ++nc) {
          const std::size_t off = static_cast<std::size_t>(nc) * H * W;
          for (int y = 0; y + 1 < H; ++y)
            for (int xx = 0; xx + 1 < W; ++xx)
              g[off + (y + 1) * W + xx + 1] += gy[off + y * W + xx];
        }
      },
      "shift_crop");
}

Tensor global_avg_pool(const Tensor& x) {
  require_nchw(x, "global_avg_pool");
  const int N = x.dim(0), C = x.dim(1), HW = x.dim(2) * x.dim(3);
  std::vector<double> out(static_cast<std::size_t>(N) * C);
  auto xd = x.data();
  for (std::size_t nc = 0; nc < out.size(); ++nc) {
    double s = 0.0;
    for (int i = 0; i < HW; ++i) s += xd[nc * HW + i];
    out[nc] = s / HW;
  }
  record_elementwise(profile::LayerKind::kGlobalAvgPool, x, {N, C});
  return detail::make_result(
      {N, C}, std::move(out), {x},
      [x, HW](std::span<const double> gy) {
        Tensor in = x;
        auto g = in.grad();
        for (std::size_t nc = 0; nc < gy.size(); ++nc) {
          const double share = gy[nc] / HW;
          for (int i = 0; i < HW; ++i) g[nc * HW + i] += share;
        }
      },
      "global_avg_pool");
}

Tensor flatten(const Tensor& x) {
  const int N = x.dim(0);
  const int rest = N == 0 ? 0 : static_cast<int>(x.numel() / N);
  auto d = x.data();
  return detail::make_result(
      {N, rest}, std::vector<double>(d.begin(), d.end()), {x},
      [x](std::span<const double> gy) {
        Tensor in = x;
        auto g = in.grad();
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += gy[i];
      },
      "flatten");
}

Tensor linear(const Tensor& x, const Tensor& weight, const Tensor& bias) {
  if (x.rank() != 2 || weight.rank() != 2 || x.dim(1) != weight.dim(1)) {
    throw ShapeError("linear: input " + shape_string(x.shape()) +
                     " incompatible with weight " + shape_string(weight.shape()));
  }
  const int N = x.dim(0), IN = x.dim(1), OUT = weight.dim(0);
  if (bias.defined() && bias.numel() != static_cast<std::size_t>(OUT)) {
    throw ShapeError("linear: bias size mismatch");
  }
  std::vector<double> out(static_cast<std::size_t>(N) * OUT);
  auto xd = x.data();
  auto wd = weight.data();
  for (int n = 0; n < N; ++n) {
    for (int o = 0; o < OUT; ++o) {
      double s = bias.defined() ? bias.at(o) : 0.0;
      for (int i = 0; i < IN; ++i) s += wd[o * IN + i] * xd[n * IN + i];
      out[static_cast<std::size_t>(n) * OUT + o] = s;
    }
  }
  if (profile::recording()) {
    profile::record({profile::LayerKind::kLinear, x.shape(), {N, OUT},
                     weight.shape(), 1, 0, false});
  }
  return detail::make_result(
      {N, OUT}, std::move(out), {x, weight, bias},
      [x, weight, bias, N, IN, OUT](std::span<const double> gy) {
        Tensor in = x, wt = weight, bs = bias;
        auto xd = in.data();
        auto wd = wt.data();
        const bool gx = detail::wants_grad(in);
        const bool gw = detail::wants_grad(wt);
        const bool gb = detail::wants_grad(bs);
        for (int n = 0; n < N; ++n) {
          for (int o = 0; o < OUT; ++o) {
            const double g = gy[static_cast<std::size_t>(n) * OUT + o];
            if (gb) bs.grad()[o] += g;
            if (gw) {
              auto gwd = wt.grad();
              for (int i = 0; i < IN; ++i) gwd[o * IN + i] += g * xd[n * IN + i];
            }
            if (gx) {
              auto gxd = in.grad();
              for (int i = 0; i < IN; ++i) gxd[n * IN + i] += g * wd[o * IN + i];
            }
          }
        }
      },
      "linear");
}

Tensor softmax_cross_entropy(const Tensor& logits, std::span<const int> labels) {
  if (logits.rank() != 2 || static_cast<std::size_t>(logits.dim(0)) != labels.size()) {
    throw ShapeError("softmax_cross_entropy: logits " +
                     shape_string(logits.shape()) + " vs " +
                     std::to_string(labels.size()) + " labels");
  }
  const int N = logits.dim(0), K = logits.dim(1);
  auto z = logits.data();
  std::vector<double> probs(z.size());
  double loss = 0.0;
  for (int n = 0; n < N; ++n) {
    const int y = labels[n];
    if (y < 0 || y >= K) throw ShapeError("softmax_cross_entropy: label out of range");
    const double* row = z.data() + static_cast<std::size_t>(n) * K;
    const double mx = *std::max_element(row, row + K);
    double sum = 0.0;
    for (int k = 0; k < K; ++k) sum += std::exp(row[k] - mx);
    const double log_sum = std::log(sum) + mx;
    for (int k = 0; k < K; ++k) {
      probs[static_cast<std::size_t>(n) * K + k] = std::exp(row[k] - log_sum);
    }
    loss += log_sum - row[y];
  }
  loss /= N;
  std::vector<int> ys(labels.begin(), labels.end());
  return detail::make_result(
      {1}, {loss}, {logits},
      [logits, probs = std::move(probs), ys = std::move(ys), N, K](
          std::span<const double> gy) {
        Tensor in = logits;
        auto g = in.grad();
        const double s = gy[0] / N;
        for (int n = 0; n < N; ++n) {
          for (int k = 0; k < K; ++k) {
            const std::size_t i = static_cast<std::size_t>(n) * K + k;
            g[i] += s * (probs[i] - (k == ys[n] ? 1.0 : 0.0));
          }
        }
      },
      "softmax_cross_entropy");
}

Tensor mse_loss(const Tensor& pred, std::span<const double> target) {
  if (pred.numel() != target.size()) throw ShapeError("mse_loss: size mismatch");
  auto p = pred.data();
  double loss = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) loss += (p[i] - target[i]) * (p[i] - target[i]);
  const double n = static_cast<double>(p.size());
  std::vector<double> t(target.begin(), target.end());
  return detail::make_result(
      {1}, {loss / n}, {pred},
      [pred, t = std::move(t), n](std::span<const double> gy) {
        Tensor in = pred;
        auto g = in.grad();
        auto p = in.data();
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += gy[0] * 2.0 * (p[i] - t[i]) / n;
      },
      "mse_loss");
}

Tensor mul_per_sample(const Tensor& x, std::span<const double> mask) {
  const int N = x.dim(0);
  if (mask.size() != static_cast<std::size_t>(N)) {
    throw ShapeError("mul_per_sample: mask size mismatch");
  }
  const std::size_t per = N == 0 ? 0 : x.numel() / N;
  std::vector<double> out(x.numel());
  auto xd = x.data();
  for (int n = 0; n < N; ++n)
    for (std::size_t i = 0; i < per; ++i) out[n * per + i] = mask[n] * xd[n * per + i];
  std::vector<double> m(mask.begin(), mask.end());
  return detail::make_result(
      x.shape(), std::move(out), {x},
      [x, m = std::move(m), per](std::span<const double> gy) {
        Tensor in = x;
        auto g = in.grad();
        for (std::size_t n = 0; n < m.size(); ++n)
          for (std::size_t i = 0; i < per; ++i) g[n * per + i] += m[n] * gy[n * per + i];
      },
      "mul_per_sample");
}

Tensor dot_const(const Tensor& x, std::span<const double> coeffs) {
  if (x.numel() != coeffs.size()) throw ShapeError("dot_const: size mismatch");
  auto d = x.data();
  double s = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) s += d[i] * coeffs[i];
  std::vector<double> c(coeffs.begin(), coeffs.end());
  return detail::make_result(
      {1}, {s}, {x},
      [x, c = std::move(c)](std::span<const double> gy) {
        Tensor in = x;
        auto g = in.grad();
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += gy[0] * c[i];
      },
      "dot_const");
}

std::vector<int> argmax_rows(const Tensor& logits) {
  const int N = logits.dim(0), K = logits.dim(1);
  std::vector<int> out(N);
  auto z = logits.data();
  for (int n = 0; n < N; ++n) {
    const double* row = z.data() + static_cast<std::size_t>(n) * K;
    out[n] = static_cast<int>(std::max_element(row, row + K) - row);
  }
  return out;
}

}  // namespace axnas::ops
