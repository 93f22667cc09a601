// nn/ops_conv.cc

// Copyright 2026  AVSQA Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <memory>

#include "common/error.h"
#include "nn/ops.h"

namespace avsqa {
namespace nn {

namespace {

using MatRM = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// im2col column blocks are capped at this many output positions so the
// scratch matrix stays small; the block is rebuilt in the backward pass
// instead of being kept alive.
constexpr int kChunkCols = 4096;

constexpr double kNormEps = 1e-5;

int conv_out(int in, int k, int stride, int pad) {
  return (in + 2 * pad - k) / stride + 1;
}

}  // namespace

int conv2d(Graph& g, int x, int w, int bias, int stride_h, int stride_w,
           int pad_h, int pad_w) {
  const Tensor& vx = g.val(x);
  const Tensor& vw = g.val(w);
  require(vx.ndim() == 4 && vw.ndim() == 4, "conv2d: want [N,C,H,W] and ",
          "[K,C,kh,kw], got ", vx.shape_str(), " and ", vw.shape_str());
  require(vx.dim(1) == vw.dim(1), "conv2d: channel mismatch ", vx.shape_str(),
          " vs ", vw.shape_str());
  const int n = vx.dim(0), c = vx.dim(1), h = vx.dim(2), wid = vx.dim(3);
  const int k = vw.dim(0), kh = vw.dim(2), kw = vw.dim(3);
  const int oh = conv_out(h, kh, stride_h, pad_h);
  const int ow = conv_out(wid, kw, stride_w, pad_w);
  require(oh >= 1 && ow >= 1, "conv2d: kernel larger than padded input");
  if (bias >= 0)
    require(g.val(bias).numel() == k, "conv2d: bias length vs ", k, " filters");
  const int ckk = c * kh * kw;
  const size_t plane = static_cast<size_t>(h) * wid;
  const size_t oplane = static_cast<size_t>(oh) * ow;

  // Shared by forward and backward: fill `col` (ckk x len, row-major) with
  // the receptive fields of output positions [p0, p0+len) of sample `sn`.
  auto fill_col = [=](const Tensor& src, int sn, int p0, int len, double* col) {
    std::fill(col, col + static_cast<size_t>(ckk) * len, 0.0);
    const double* xs = src.data.data() + static_cast<size_t>(sn) * c * plane;
    for (int ci = 0; ci < c; ++ci)
      for (int i = 0; i < kh; ++i)
        for (int j = 0; j < kw; ++j) {
          double* row = col + (static_cast<size_t>((ci * kh + i) * kw + j)) * len;
          for (int m = 0; m < len; ++m) {
            const int p = p0 + m;
            const int ih = (p / ow) * stride_h - pad_h + i;
            const int iw = (p % ow) * stride_w - pad_w + j;
            if (ih >= 0 && ih < h && iw >= 0 && iw < wid)
              row[m] = xs[static_cast<size_t>(ci) * plane + ih * wid + iw];
          }
        }
  };

  Tensor out({n, k, oh, ow});
  {
    std::vector<double> colbuf(static_cast<size_t>(ckk) * kChunkCols);
    Eigen::Map<const MatRM> wmat(vw.data.data(), k, ckk);
    for (int sn = 0; sn < n; ++sn) {
      double* os = out.data.data() + static_cast<size_t>(sn) * k * oplane;
      for (int p0 = 0; p0 < static_cast<int>(oplane); p0 += kChunkCols) {
        const int len = std::min<int>(kChunkCols, static_cast<int>(oplane) - p0);
        fill_col(vx, sn, p0, len, colbuf.data());
        MatRM ob = wmat * Eigen::Map<const MatRM>(colbuf.data(), ckk, len);
        for (int kk = 0; kk < k; ++kk)
          std::copy(ob.data() + static_cast<size_t>(kk) * len,
                    ob.data() + static_cast<size_t>(kk + 1) * len,
                    os + static_cast<size_t>(kk) * oplane + p0);
      }
      if (bias >= 0) {
        const Tensor& vb = g.val(bias);
        for (int kk = 0; kk < k; ++kk) {
          double* dst = os + static_cast<size_t>(kk) * oplane;
          for (size_t p = 0; p < oplane; ++p) dst[p] += vb[static_cast<size_t>(kk)];
        }
      }
    }
  }

  std::vector<int> parents = {x, w};
  if (bias >= 0) parents.push_back(bias);
  return g.add(std::move(out), std::move(parents),
               [=](Graph& gr, int self) {
    const Tensor& go = *gr.grad_or_null(self);
    Tensor* gx = gr.grad_or_null(x);
    Tensor* gw = gr.grad_or_null(w);
    Tensor* gb = bias >= 0 ? gr.grad_or_null(bias) : nullptr;
    if (gb)
      for (int sn = 0; sn < n; ++sn)
        for (int kk = 0; kk < k; ++kk) {
          const double* src = go.data.data() +
              (static_cast<size_t>(sn) * k + kk) * oplane;
          double s = 0.0;
          for (size_t p = 0; p < oplane; ++p) s += src[p];
          (*gb)[static_cast<size_t>(kk)] += s;
        }
    if (!gx && !gw) return;
    std::vector<double> colbuf(static_cast<size_t>(ckk) * kChunkCols);
    std::vector<double> gobuf(static_cast<size_t>(k) * kChunkCols);
    Eigen::Map<const MatRM> wmat(gr.val(w).data.data(), k, ckk);
    for (int sn = 0; sn < n; ++sn) {
      const double* gos = go.data.data() + static_cast<size_t>(sn) * k * oplane;
      for (int p0 = 0; p0 < static_cast<int>(oplane); p0 += kChunkCols) {
        const int len = std::min<int>(kChunkCols, static_cast<int>(oplane) - p0);
        for (int kk = 0; kk < k; ++kk)
          std::copy(gos + static_cast<size_t>(kk) * oplane + p0,
                    gos + static_cast<size_t>(kk) * oplane + p0 + len,
                    gobuf.data() + static_cast<size_t>(kk) * len);
        Eigen::Map<const MatRM> gmap(gobuf.data(), k, len);
        if (gw) {
          fill_col(gr.val(x), sn, p0, len, colbuf.data());
          Eigen::Map<MatRM>(gw->data.data(), k, ckk).noalias() +=
              gmap * Eigen::Map<const MatRM>(colbuf.data(), ckk, len).transpose();
        }
        if (gx) {
          MatRM dcol = wmat.transpose() * gmap;
          double* gxs = gx->data.data() + static_cast<size_t>(sn) * c * plane;
          for (int ci = 0; ci < c; ++ci)
            for (int i = 0; i < kh; ++i)
              for (int j = 0; j < kw; ++j) {
                const double* row =
                    dcol.data() + (static_cast<size_t>((ci * kh + i) * kw + j)) * len;
                for (int m = 0; m < len; ++m) {
                  const int p = p0 + m;
                  const int ih = (p / ow) * stride_h - pad_h + i;
                  const int iw = (p % ow) * stride_w - pad_w + j;
                  if (ih >= 0 && ih < h && iw >= 0 && iw < wid)
                    gxs[static_cast<size_t>(ci) * plane + ih * wid + iw] += row[m];
                }
              }
        }
      }
    }
  });
}

int conv3d(Graph& g, int x, int w, int bias, std::array<int, 3> stride,
           std::array<int, 3> pad) {
  const Tensor& vx = g.val(x);
  const Tensor& vw = g.val(w);
  require(vx.ndim() == 4 && vw.ndim() == 5, "conv3d: want [C,M,H,W] and ",
          "[K,C,kt,kh,kw], got ", vx.shape_str(), " and ", vw.shape_str());
  require(vx.dim(0) == vw.dim(1), "conv3d: channel mismatch ", vx.shape_str(),
          " vs ", vw.shape_str());
  const int c = vx.dim(0), m = vx.dim(1), h = vx.dim(2), wid = vx.dim(3);
  const int k = vw.dim(0), kt = vw.dim(2), kh = vw.dim(3), kw = vw.dim(4);
  const int om = conv_out(m, kt, stride[0], pad[0]);
  const int oh = conv_out(h, kh, stride[1], pad[1]);
  const int ow = conv_out(wid, kw, stride[2], pad[2]);
  require(om >= 1 && oh >= 1 && ow >= 1, "conv3d: kernel larger than padded input");
  if (bias >= 0)
    require(g.val(bias).numel() == k, "conv3d: bias length vs ", k, " filters");
  const int ckk = c * kt * kh * kw;
  const size_t plane = static_cast<size_t>(h) * wid;
  const size_t vol = static_cast<size_t>(m) * plane;
  const size_t ovol = static_cast<size_t>(om) * oh * ow;

  auto fill_col = [=](const Tensor& src, int p0, int len, double* col) {
    std::fill(col, col + static_cast<size_t>(ckk) * len, 0.0);
    for (int ci = 0; ci < c; ++ci)
      for (int dt = 0; dt < kt; ++dt)
        for (int i = 0; i < kh; ++i)
          for (int j = 0; j < kw; ++j) {
            double* row = col +
                static_cast<size_t>(((ci * kt + dt) * kh + i) * kw + j) * len;
            for (int q = 0; q < len; ++q) {
              const int p = p0 + q;
              const int pm = p / (oh * ow);
              const int ph = (p / ow) % oh;
              const int pw = p % ow;
              const int im = pm * stride[0] - pad[0] + dt;
              const int ih = ph * stride[1] - pad[1] + i;
              const int iw = pw * stride[2] - pad[2] + j;
              if (im >= 0 && im < m && ih >= 0 && ih < h && iw >= 0 && iw < wid)
                row[q] = src.data[static_cast<size_t>(ci) * vol + im * plane +
                                  ih * wid + iw];
            }
          }
  };

  Tensor out({k, om, oh, ow});
  {
    std::vector<double> colbuf(static_cast<size_t>(ckk) * kChunkCols);
    Eigen::Map<const MatRM> wmat(vw.data.data(), k, ckk);
    for (int p0 = 0; p0 < static_cast<int>(ovol); p0 += kChunkCols) {
      const int len = std::min<int>(kChunkCols, static_cast<int>(ovol) - p0);
      fill_col(vx, p0, len, colbuf.data());
      MatRM ob = wmat * Eigen::Map<const MatRM>(colbuf.data(), ckk, len);
      for (int kk = 0; kk < k; ++kk)
        std::copy(ob.data() + static_cast<size_t>(kk) * len,
                  ob.data() + static_cast<size_t>(kk + 1) * len,
                  out.data.data() + static_cast<size_t>(kk) * ovol + p0);
    }
    if (bias >= 0) {
      const Tensor& vb = g.val(bias);
      for (int kk = 0; kk < k; ++kk) {
        double* dst = out.data.data() + static_cast<size_t>(kk) * ovol;
        for (size_t p = 0; p < ovol; ++p) dst[p] += vb[static_cast<size_t>(kk)];
      }
    }
  }

  std::vector<int> parents = {x, w};
  if (bias >= 0) parents.push_back(bias);
  return g.add(std::move(out), std::move(parents),
               [=](Graph& gr, int self) {
    const Tensor& go = *gr.grad_or_null(self);
    Tensor* gx = gr.grad_or_null(x);
    Tensor* gw = gr.grad_or_null(w);
    Tensor* gb = bias >= 0 ? gr.grad_or_null(bias) : nullptr;
    if (gb)
      for (int kk = 0; kk < k; ++kk) {
        const double* src = go.data.data() + static_cast<size_t>(kk) * ovol;
        double s = 0.0;
        for (size_t p = 0; p < ovol; ++p) s += src[p];
        (*gb)[static_cast<size_t>(kk)] += s;
      }
    if (!gx && !gw) return;
    std::vector<double> colbuf(static_cast<size_t>(ckk) * kChunkCols);
    std::vector<double> gobuf(static_cast<size_t>(k) * kChunkCols);
    Eigen::Map<const MatRM> wmat(gr.val(w).data.data(), k, ckk);
    for (int p0 = 0; p0 < static_cast<int>(ovol); p0 += kChunkCols) {
      const int len = std::min<int>(kChunkCols, static_cast<int>(ovol) - p0);
      for (int kk = 0; kk < k; ++kk)
        std::copy(go.data.data() + static_cast<size_t>(kk) * ovol + p0,
                  go.data.data() + static_cast<size_t>(kk) * ovol + p0 + len,
                  gobuf.data() + static_cast<size_t>(kk) * len);
      Eigen::Map<const MatRM> gmap(gobuf.data(), k, len);
      if (gw) {
        fill_col(gr.val(x), p0, len, colbuf.data());
        Eigen::Map<MatRM>(gw->data.data(), k, ckk).noalias() +=
            gmap * Eigen::Map<const MatRM>(colbuf.data(), ckk, len).transpose();
      }
      if (gx) {
        MatRM dcol = wmat.transpose() * gmap;
        for (int ci = 0; ci < c; ++ci)
          for (int dt = 0; dt < kt; ++dt)
            for (int i = 0; i < kh; ++i)
              for (int j = 0; j < kw; ++j) {
                const double* row = dcol.data() +
                    static_cast<size_t>(((ci * kt + dt) * kh + i) * kw + j) * len;
                for (int q = 0; q < len; ++q) {
                  const int p = p0 + q;
                  const int pm = p / (oh * ow);
                  const int ph = (p / ow) % oh;
                  const int pw = p % ow;
                  const int im = pm * stride[0] - pad[0] + dt;
                  const int ih = ph * stride[1] - pad[1] + i;
                  const int iw = pw * stride[2] - pad[2] + j;
                  if (im >= 0 && im < m && ih >= 0 && ih < h && iw >= 0 &&
                      iw < wid)
                    gx->data[static_cast<size_t>(ci) * vol + im * plane +
                             ih * wid + iw] += row[q];
                }
              }
      }
    }
  });
}

int maxpool2d(Graph& g, int x, int k, int stride, int pad) {
  const Tensor& vx = g.val(x);
  require(vx.ndim() == 4, "maxpool2d: want [N,C,H,W], got ", vx.shape_str());
  const int n = vx.dim(0), c = vx.dim(1), h = vx.dim(2), w = vx.dim(3);
  const int oh = conv_out(h, k, stride, pad);
  const int ow = conv_out(w, k, stride, pad);
  require(oh >= 1 && ow >= 1, "maxpool2d: window larger than padded input");
  Tensor out({n, c, oh, ow});
  auto arg = std::make_shared<std::vector<int64_t>>(out.data.size());
  const size_t plane = static_cast<size_t>(h) * w;
  size_t o = 0;
  for (int sn = 0; sn < n; ++sn)
    for (int ci = 0; ci < c; ++ci) {
      const double* xs = vx.data.data() + (static_cast<size_t>(sn) * c + ci) * plane;
      const size_t base = (static_cast<size_t>(sn) * c + ci) * plane;
      for (int po = 0; po < oh; ++po)
        for (int qo = 0; qo < ow; ++qo, ++o) {
          double best = 0.0;
          int64_t besti = -1;
          for (int i = 0; i < k; ++i) {
            const int ih = po * stride - pad + i;
            if (ih < 0 || ih >= h) continue;
            for (int j = 0; j < k; ++j) {
              const int iw = qo * stride - pad + j;
              if (iw < 0 || iw >= w) continue;
              const double v = xs[static_cast<size_t>(ih) * w + iw];
              if (besti < 0 || v > best) {
                best = v;
                besti = static_cast<int64_t>(base + static_cast<size_t>(ih) * w + iw);
              }
            }
          }
          out[o] = best;
          (*arg)[o] = besti;
        }
    }
  return g.add(std::move(out), {x}, [x, arg](Graph& gr, int self) {
    const Tensor& go = *gr.grad_or_null(self);
    if (Tensor* gx = gr.grad_or_null(x))
      for (size_t i = 0; i < go.data.size(); ++i)
        (*gx)[static_cast<size_t>((*arg)[i])] += go[i];
  });
}

namespace {

// Shared normalization backward for one group of `len` strided elements.
// Values in the group are normalized as y = gamma*(x - mu)*istd + beta.
struct NormStats {
  std::vector<double> mu;
  std::vector<double> istd;
};

}  // namespace

int channel_norm2d(Graph& g, int x, int gamma, int beta) {
  const Tensor& vx = g.val(x);
  require(vx.ndim() == 4, "channel_norm2d: want [N,C,H,W], got ", vx.shape_str());
  const int n = vx.dim(0), c = vx.dim(1);
  const size_t hw = static_cast<size_t>(vx.dim(2)) * vx.dim(3);
  require(g.val(gamma).numel() == c && g.val(beta).numel() == c,
          "channel_norm2d: gamma/beta length vs ", c, " channels");
  require(hw >= 2, "channel_norm2d: group needs at least 2 elements");
  auto st = std::make_shared<NormStats>();
  st->mu.resize(static_cast<size_t>(n) * c);
  st->istd.resize(static_cast<size_t>(n) * c);
  Tensor out(vx.shape);
  const Tensor& vg = g.val(gamma);
  const Tensor& vb = g.val(beta);
  for (int sn = 0; sn < n; ++sn)
    for (int ci = 0; ci < c; ++ci) {
      const size_t base = (static_cast<size_t>(sn) * c + ci) * hw;
      double s = 0.0, s2 = 0.0;
      for (size_t i = 0; i < hw; ++i) s += vx[base + i];
      const double mu = s / static_cast<double>(hw);
      for (size_t i = 0; i < hw; ++i) {
        const double d = vx[base + i] - mu;
        s2 += d * d;
      }
      const double istd = 1.0 / std::sqrt(s2 / static_cast<double>(hw) + kNormEps);
      st->mu[static_cast<size_t>(sn) * c + ci] = mu;
      st->istd[static_cast<size_t>(sn) * c + ci] = istd;
      const double ga = vg[static_cast<size_t>(ci)], be = vb[static_cast<size_t>(ci)];
      for (size_t i = 0; i < hw; ++i)
        out[base + i] = ga * (vx[base + i] - mu) * istd + be;
    }
  return g.add(std::move(out), {x, gamma, beta},
               [x, gamma, beta, n, c, hw, st](Graph& gr, int self) {
    const Tensor& go = *gr.grad_or_null(self);
    const Tensor& vx2 = gr.val(x);
    const Tensor& vg = gr.val(gamma);
    Tensor* gx = gr.grad_or_null(x);
    Tensor* gg = gr.grad_or_null(gamma);
    Tensor* gb = gr.grad_or_null(beta);
    for (int sn = 0; sn < n; ++sn)
      for (int ci = 0; ci < c; ++ci) {
        const size_t base = (static_cast<size_t>(sn) * c + ci) * hw;
        const double mu = st->mu[static_cast<size_t>(sn) * c + ci];
        const double istd = st->istd[static_cast<size_t>(sn) * c + ci];
        double sum_dy = 0.0, sum_dyxh = 0.0;
        for (size_t i = 0; i < hw; ++i) {
          const double xh = (vx2[base + i] - mu) * istd;
          sum_dy += go[base + i];
          sum_dyxh += go[base + i] * xh;
        }
        if (gb) (*gb)[static_cast<size_t>(ci)] += sum_dy;
        if (gg) (*gg)[static_cast<size_t>(ci)] += sum_dyxh;
        if (gx) {
          const double ga = vg[static_cast<size_t>(ci)];
          const double inv = 1.0 / static_cast<double>(hw);
          for (size_t i = 0; i < hw; ++i) {
            const double xh = (vx2[base + i] - mu) * istd;
            (*gx)[base + i] += ga * istd *
                (go[base + i] - sum_dy * inv - xh * sum_dyxh * inv);
          }
        }
      }
  });
}

int channel_norm3d_masked(Graph& g, int x, int gamma, int beta, int valid_m) {
  const Tensor& vx = g.val(x);
  require(vx.ndim() == 4, "channel_norm3d: want [C,M,H,W], got ", vx.shape_str());
  const int c = vx.dim(0), m = vx.dim(1);
  require(valid_m >= 1 && valid_m <= m, "channel_norm3d: valid_m ", valid_m,
          " out of range for ", vx.shape_str());
  const size_t hw = static_cast<size_t>(vx.dim(2)) * vx.dim(3);
  const size_t group = static_cast<size_t>(valid_m) * hw;
  const size_t vol = static_cast<size_t>(m) * hw;
  require(g.val(gamma).numel() == c && g.val(beta).numel() == c,
          "channel_norm3d: gamma/beta length vs ", c, " channels");
  require(group >= 2, "channel_norm3d: group needs at least 2 elements");
  auto st = std::make_shared<NormStats>();
  st->mu.resize(static_cast<size_t>(c));
  st->istd.resize(static_cast<size_t>(c));
  Tensor out(vx.shape);
  const Tensor& vg = g.val(gamma);
  const Tensor& vb = g.val(beta);
  for (int ci = 0; ci < c; ++ci) {
    const size_t base = static_cast<size_t>(ci) * vol;
    double s = 0.0, s2 = 0.0;
    for (size_t i = 0; i < group; ++i) s += vx[base + i];
    const double mu = s / static_cast<double>(group);
    for (size_t i = 0; i < group; ++i) {
      const double d = vx[base + i] - mu;
      s2 += d * d;
    }
    const double istd = 1.0 / std::sqrt(s2 / static_cast<double>(group) + kNormEps);
    st->mu[static_cast<size_t>(ci)] = mu;
    st->istd[static_cast<size_t>(ci)] = istd;
    const double ga = vg[static_cast<size_t>(ci)], be = vb[static_cast<size_t>(ci)];
    for (size_t i = 0; i < group; ++i)
      out[base + i] = ga * (vx[base + i] - mu) * istd + be;
    // Padded frames stay zero.
  }
  return g.add(std::move(out), {x, gamma, beta},
               [x, gamma, beta, c, vol, group, st](Graph& gr, int self) {
    const Tensor& go = *gr.grad_or_null(self);
    const Tensor& vx2 = gr.val(x);
    const Tensor& vg = gr.val(gamma);
    Tensor* gx = gr.grad_or_null(x);
    Tensor* gg = gr.grad_or_null(gamma);
    Tensor* gb = gr.grad_or_null(beta);
    for (int ci = 0; ci < c; ++ci) {
      const size_t base = static_cast<size_t>(ci) * vol;
      const double mu = st->mu[static_cast<size_t>(ci)];
      const double istd = st->istd[static_cast<size_t>(ci)];
      double sum_dy = 0.0, sum_dyxh = 0.0;
      for (size_t i = 0; i < group; ++i) {
        const double xh = (vx2[base + i] - mu) * istd;
        sum_dy += go[base + i];
        sum_dyxh += go[base + i] * xh;
      }
      if (gb) (*gb)[static_cast<size_t>(ci)] += sum_dy;
      if (gg) (*gg)[static_cast<size_t>(ci)] += sum_dyxh;
      if (gx) {
        const double ga = vg[static_cast<size_t>(ci)];
        const double inv = 1.0 / static_cast<double>(group);
        for (size_t i = 0; i < group; ++i) {
          const double xh = (vx2[base + i] - mu) * istd;
          (*gx)[base + i] += ga * istd *
              (go[base + i] - sum_dy * inv - xh * sum_dyxh * inv);
        }
      }
    }
  });
}

int global_avg_pool2d(Graph& g, int x) {
  const Tensor& vx = g.val(x);
  require(vx.ndim() == 4, "global_avg_pool2d: want [N,C,H,W], got ",
          vx.shape_str());
  const int n = vx.dim(0), c = vx.dim(1);
  const size_t hw = static_cast<size_t>(vx.dim(2)) * vx.dim(3);
  Tensor out({n, c});
  for (int sn = 0; sn < n; ++sn)
    for (int ci = 0; ci < c; ++ci) {
      const size_t base = (static_cast<size_t>(sn) * c + ci) * hw;
      double s = 0.0;
      for (size_t i = 0; i < hw; ++i) s += vx[base + i];
      out.at(sn, ci) = s / static_cast<double>(hw);
    }
  return g.add(std::move(out), {x}, [x, n, c, hw](Graph& gr, int self) {
    const Tensor& go = *gr.grad_or_null(self);
    if (Tensor* gx = gr.grad_or_null(x))
      for (int sn = 0; sn < n; ++sn)
        for (int ci = 0; ci < c; ++ci) {
          const size_t base = (static_cast<size_t>(sn) * c + ci) * hw;
          const double w = go.at(sn, ci) / static_cast<double>(hw);
          for (size_t i = 0; i < hw; ++i) (*gx)[base + i] += w;
        }
  });
}

}  // namespace nn
}  // namespace avsqa
