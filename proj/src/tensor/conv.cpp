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

#include <algorithm>
#include <cstdint>
#include <vector>

#include "axnas/errors.hpp"
#include "axnas/mult/quant.hpp"
#include "axnas/tensor/ops.hpp"
#include "axnas/tensor/profile.hpp"

namespace axnas::ops {
namespace {

struct ConvGeometry {
  int n, c, h, w;        // input
  int oc, cg, kh, kw;    // weight
  int groups, ocg;       // groups and output channels per group
  int oh, ow;
  int stride, pad, dil;
  int k() const { return cg * kh * kw; }
  int p() const { return oh * ow; }
};

ConvGeometry geometry(const Tensor& input, const Tensor& weight,
                      const Conv2dOptions& opt) {
  if (input.rank() != 4 || weight.rank() != 4) {
    throw ShapeError("conv2d expects NCHW input and OIHW weight, got " +
                     shape_string(input.shape()) + " and " +
                     shape_string(weight.shape()));
  }
  if (opt.stride < 1 || opt.dilation < 1 || opt.groups < 1 || opt.padding < 0) {
    throw ShapeError("conv2d: stride, dilation and groups must be >= 1");
  }
  ConvGeometry g{};
  g.n = input.dim(0);
  g.c = input.dim(1);
  g.h = input.dim(2);
  g.w = input.dim(3);
  g.oc = weight.dim(0);
  g.cg = weight.dim(1);
  g.kh = weight.dim(2);
  g.kw = weight.dim(3);
  g.groups = opt.groups;
  if (g.c % g.groups != 0 || g.oc % g.groups != 0 || g.c / g.groups != g.cg) {
    throw ShapeError("conv2d: groups=" + std::to_string(g.groups) +
                     " incompatible with input " + shape_string(input.shape()) +
                     " and weight " + shape_string(weight.shape()));
  }
  g.ocg = g.oc / g.groups;
  g.stride = opt.stride;
  g.pad = opt.padding;
  g.dil = opt.dilation;
  g.oh = conv_out_size(g.h, g.kh, g.stride, g.pad, g.dil);
  g.ow = conv_out_size(g.w, g.kw, g.stride, g.pad, g.dil);
  if (g.oh <= 0 || g.ow <= 0) {
    throw ShapeError("conv2d: empty output for input " +
                     shape_string(input.shape()));
  }
  return g;
}

// Column matrix of shape (cg*kh*kw, oh*ow) for one sample and group.
template <typename T>
void im2col(const T* src, const ConvGeometry& g, T pad_value, T* col) {
  const int P = g.p();
  for (int ci = 0; ci < g.cg; ++ci) {
    const T* plane = src + static_cast<std::size_t>(ci) * g.h * g.w;
    for (int ky = 0; ky < g.kh; ++ky) {
      for (int kx = 0; kx < g.kw; ++kx) {
        T* row = col + (static_cast<std::size_t>((ci * g.kh + ky) * g.kw + kx)) * P;
        for (int oy = 0; oy < g.oh; ++oy) {
          const int iy = oy * g.stride - g.pad + ky * g.dil;
          T* out = row + oy * g.ow;
          if (iy < 0 || iy >= g.h) {
            std::fill(out, out + g.ow, pad_value);
            continue;
          }
          const T* in_row = plane + iy * g.w;
          for (int ox = 0; ox < g.ow; ++ox) {
            const int ix = ox * g.stride - g.pad + kx * g.dil;
            out[ox] = (ix < 0 || ix >= g.w) ? pad_value : in_row[ix];
          }
        }
      }
    }
  }
}

void col2im_add(const double* col, const ConvGeometry& g, double* dst) {
  const int P = g.p();
  for (int ci = 0; ci < g.cg; ++ci) {
    double* plane = dst + static_cast<std::size_t>(ci) * g.h * g.w;
    for (int ky = 0; ky < g.kh; ++ky) {
      for (int kx = 0; kx < g.kw; ++kx) {
        const double* row =
            col + (static_cast<std::size_t>((ci * g.kh + ky) * g.kw + kx)) * P;
        for (int oy = 0; oy < g.oh; ++oy) {
          const int iy = oy * g.stride - g.pad + ky * g.dil;
          if (iy < 0 || iy >= g.h) continue;
          double* out_row = plane + iy * g.w;
          for (int ox = 0; ox < g.ow; ++ox) {
            const int ix = ox * g.stride - g.pad + kx * g.dil;
            if (ix >= 0 && ix < g.w) out_row[ix] += row[oy * g.ow + ox];
          }
        }
      }
    }
  }
}

bool is_pointwise(const ConvGeometry& g) {
  return g.kh == 1 && g.kw == 1 && g.stride == 1 && g.pad == 0;
}

void real_forward(const ConvGeometry& g, const double* x, const double* w,
                  const double* b, double* y) {
  const int K = g.k();
  const int P = g.p();
  std::vector<double> col(is_pointwise(g) ? 0 : static_cast<std::size_t>(K) * P);
  auto* counters = profile::active_counters();
  for (int n = 0; n < g.n; ++n) {
    for (int grp = 0; grp < g.groups; ++grp) {
      const double* src =
          x + (static_cast<std::size_t>(n) * g.c + grp * g.cg) * g.h * g.w;
      const double* cols = src;
      if (!is_pointwise(g)) {
        im2col(src, g, 0.0, col.data());
        cols = col.data();
      }
      for (int o = 0; o < g.ocg; ++o) {
        const int oc = grp * g.ocg + o;
        double* out = y + (static_cast<std::size_t>(n) * g.oc + oc) * P;
        std::fill(out, out + P, b != nullptr ? b[oc] : 0.0);
        const double* wrow = w + static_cast<std::size_t>(oc) * K;
        for (int k = 0; k < K; ++k) {
          const double wk = wrow[k];
          const double* c = cols + static_cast<std::size_t>(k) * P;
          for (int p = 0; p < P; ++p) out[p] += wk * c[p];
          if (counters != nullptr) counters->real_conv_macs += static_cast<std::uint64_t>(P);
        }
      }
    }
  }
}

void quant8_forward(const ConvGeometry& g, const double* x, const double* w,
                    const double* b, const Quant8& mode,
                    std::span<const double> xs, std::span<const double> ws,
                    double* y) {
  const auto qa = calibrate_tensor(xs, mode.activation_scheme);
  const auto qw = calibrate_tensor(ws, mult::QuantScheme::kAsymmetric);
  std::vector<std::uint8_t> xcodes(xs.size());
  std::vector<std::uint8_t> wcodes(ws.size());
  for (std::size_t i = 0; i < xs.size(); ++i) xcodes[i] = mult::quantize(x[i], qa);
  for (std::size_t i = 0; i < ws.size(); ++i) wcodes[i] = mult::quantize(w[i], qw);

  const int K = g.k();
  const int P = g.p();
  const std::int64_t za = qa.zero_point;
  const std::int64_t zw = qw.zero_point;
  const double s = qa.scale * qw.scale;
  const auto& lut = *mode.multiplier;
  auto* counters = profile::active_counters();

  std::vector<std::uint8_t> col(static_cast<std::size_t>(K) * P);
  std::vector<std::int64_t> colsum(P);
  std::vector<std::int64_t> acc(P);
  for (int n = 0; n < g.n; ++n) {
    for (int grp = 0; grp < g.groups; ++grp) {
      const std::uint8_t* src =
          xcodes.data() + (static_cast<std::size_t>(n) * g.c + grp * g.cg) * g.h * g.w;
      // Padding carries the code of real 0.
      im2col(src, g, static_cast<std::uint8_t>(za), col.data());
      std::fill(colsum.begin(), colsum.end(), 0);
      for (int k = 0; k < K; ++k) {
        const std::uint8_t* c = col.data() + static_cast<std::size_t>(k) * P;
        for (int p = 0; p < P; ++p) colsum[p] += c[p];
      }
      for (int o = 0; o < g.ocg; ++o) {
        const int oc = grp * g.ocg + o;
        const std::uint8_t* wrow = wcodes.data() + static_cast<std::size_t>(oc) * K;
        std::fill(acc.begin(), acc.end(), 0);
        std::int64_t wsum = 0;
        for (int k = 0; k < K; ++k) {
          const std::uint16_t* products = lut.weight_row(wrow[k]);
          const std::uint8_t* c = col.data() + static_cast<std::size_t>(k) * P;
          for (int p = 0; p < P; ++p) acc[p] += products[c[p]];
          if (counters != nullptr) counters->lut_lookups += static_cast<std::uint64_t>(P);
          wsum += wrow[k];
        }
        const std::int64_t constant = za * zw * K - za * wsum;
        const double bias = b != nullptr ? b[oc] : 0.0;
        double* out = y + (static_cast<std::size_t>(n) * g.oc + oc) * P;
        for (int p = 0; p < P; ++p) {
          const std::int64_t total = acc[p] + constant - zw * colsum[p];
          out[p] = s * static_cast<double>(total) + bias;
        }
      }
    }
  }
}

void real_backward(const ConvGeometry& g, const double* x, const double* w,
                   std::span<const double> gy, double* gx, double* gw,
                   double* gb) {
  const int K = g.k();
  const int P = g.p();
  const bool pointwise = is_pointwise(g);
  std::vector<double> col(pointwise ? 0 : static_cast<std::size_t>(K) * P);
  std::vector<double> dcol(gx != nullptr && !pointwise ? static_cast<std::size_t>(K) * P : 0);
  for (int n = 0; n < g.n; ++n) {
    for (int grp = 0; grp < g.groups; ++grp) {
      const std::size_t in_off =
          (static_cast<std::size_t>(n) * g.c + grp * g.cg) * g.h * g.w;
      const double* cols = x + in_off;
      if (gw != nullptr && !pointwise) {
        im2col(x + in_off, g, 0.0, col.data());
        cols = col.data();
      }
      double* dcols = pointwise && gx != nullptr ? gx + in_off : dcol.data();
      if (gx != nullptr && !pointwise) std::fill(dcol.begin(), dcol.end(), 0.0);
      for (int o = 0; o < g.ocg; ++o) {
        const int oc = grp * g.ocg + o;
        const double* dy = gy.data() + (static_cast<std::size_t>(n) * g.oc + oc) * P;
        if (gb != nullptr) {
          double s = 0.0;
          for (int p = 0; p < P; ++p) s += dy[p];
          gb[oc] += s;
        }
        const double* wrow = w + static_cast<std::size_t>(oc) * K;
        double* gwrow = gw != nullptr ? gw + static_cast<std::size_t>(oc) * K : nullptr;
        for (int k = 0; k < K; ++k) {
          if (gwrow != nullptr) {
            const double* c = cols + static_cast<std::size_t>(k) * P;
            double s = 0.0;
            for (int p = 0; p < P; ++p) s += dy[p] * c[p];
            gwrow[k] += s;
          }
          if (gx != nullptr) {
            const double wk = wrow[k];
            double* d = dcols + static_cast<std::size_t>(k) * P;
            for (int p = 0; p < P; ++p) d[p] += wk * dy[p];
          }
        }
      }
      if (gx != nullptr && !pointwise) col2im_add(dcol.data(), g, gx + in_off);
    }
  }
}

}  // namespace

int conv_out_size(int in, int kernel, int stride, int padding, int dilation) {
  return (in + 2 * padding - dilation * (kernel - 1) - 1) / stride + 1;
}

mult::QuantParams calibrate_tensor(std::span<const double> values,
                                   mult::QuantScheme scheme) {
  if (values.empty()) throw std::invalid_argument("calibrate: empty tensor");
  double lo = 0.0;
  double hi = 0.0;
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return mult::calibrate_range(lo, hi, scheme);
}

Tensor conv2d(const Tensor& input, const Tensor& weight, const Tensor& bias,
              const Conv2dOptions& opt, const ExecMode& mode) {
  const ConvGeometry g = geometry(input, weight, opt);
  if (bias.defined() && (bias.rank() != 1 || bias.dim(0) != g.oc)) {
    throw ShapeError("conv2d: bias shape " + shape_string(bias.shape()));
  }
  Shape out_shape{g.n, g.oc, g.oh, g.ow};
  std::vector<double> out(shape_numel(out_shape));
  const double* b = bias.defined() ? bias.data().data() : nullptr;
  const auto* q8 = std::get_if<Quant8>(&mode);
  if (opt.approximable && q8 != nullptr) {
    quant8_forward(g, input.data().data(), weight.data().data(), b, *q8,
                   input.data(), weight.data(), out.data());
  } else {
    real_forward(g, input.data().data(), weight.data().data(), b, out.data());
  }
  if (profile::recording()) {
    profile::record({profile::LayerKind::kConv, input.shape(), out_shape,
                     weight.shape(), g.groups, 0, opt.approximable});
  }
  return detail::make_result(
      std::move(out_shape), std::move(out), {input, weight, bias},
      [input, weight, bias, g](std::span<const double> gy) {
        Tensor in = input;
        Tensor wt = weight;
        Tensor bs = bias;
        double* gx = detail::wants_grad(in) ? in.grad().data() : nullptr;
        double* gw = detail::wants_grad(wt) ? wt.grad().data() : nullptr;
        double* gb = detail::wants_grad(bs) ? bs.grad().data() : nullptr;
        real_backward(g, in.data().data(), wt.data().data(), gy, gx, gw, gb);
      },
      "conv2d");
}

}  // namespace axnas::ops
