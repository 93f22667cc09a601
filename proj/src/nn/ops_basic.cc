// nn/ops_basic.cc

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

#include "nn/ops.h"

#include <Eigen/Dense>

#include "common/error.h"

namespace avsqa {
namespace nn {

namespace {

using MatRM = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapM = Eigen::Map<MatRM>;
using MapC = Eigen::Map<const MatRM>;

MapC map2(const Tensor& t) {
  return MapC(t.data.data(), t.dim(0), t.dim(1));
}
MapM map2(Tensor& t) {
  return MapM(t.data.data(), t.dim(0), t.dim(1));
}

}  // namespace

int constant(Graph& g, Tensor value) { return g.leaf(std::move(value), false); }
int variable(Graph& g, Tensor value) { return g.leaf(std::move(value), true); }

int add(Graph& g, int a, int b) {
  require(same_shape(g.val(a), g.val(b)), "add: shape mismatch ",
          g.val(a).shape_str(), " vs ", g.val(b).shape_str());
  Tensor out = g.val(a);
  const Tensor& vb = g.val(b);
  for (size_t i = 0; i < out.data.size(); ++i) out[i] += vb[i];
  return g.add(std::move(out), {a, b}, [a, b](Graph& gr, int self) {
    const Tensor& go = *gr.grad_or_null(self);
    if (Tensor* ga = gr.grad_or_null(a))
      for (size_t i = 0; i < go.data.size(); ++i) (*ga)[i] += go[i];
    if (Tensor* gb = gr.grad_or_null(b))
      for (size_t i = 0; i < go.data.size(); ++i) (*gb)[i] += go[i];
  });
}

int sub(Graph& g, int a, int b) {
  require(same_shape(g.val(a), g.val(b)), "sub: shape mismatch ",
          g.val(a).shape_str(), " vs ", g.val(b).shape_str());
  Tensor out = g.val(a);
  const Tensor& vb = g.val(b);
  for (size_t i = 0; i < out.data.size(); ++i) out[i] -= vb[i];
  return g.add(std::move(out), {a, b}, [a, b](Graph& gr, int self) {
    const Tensor& go = *gr.grad_or_null(self);
    if (Tensor* ga = gr.grad_or_null(a))
      for (size_t i = 0; i < go.data.size(); ++i) (*ga)[i] += go[i];
    if (Tensor* gb = gr.grad_or_null(b))
      for (size_t i = 0; i < go.data.size(); ++i) (*gb)[i] -= go[i];
  });
}

int mul(Graph& g, int a, int b) {
  require(same_shape(g.val(a), g.val(b)), "mul: shape mismatch ",
          g.val(a).shape_str(), " vs ", g.val(b).shape_str());
  Tensor out = g.val(a);
  const Tensor& vb = g.val(b);
  for (size_t i = 0; i < out.data.size(); ++i) out[i] *= vb[i];
  return g.add(std::move(out), {a, b}, [a, b](Graph& gr, int self) {
    const Tensor& go = *gr.grad_or_null(self);
    const Tensor& va = gr.val(a);
    const Tensor& vb2 = gr.val(b);
    if (Tensor* ga = gr.grad_or_null(a))
      for (size_t i = 0; i < go.data.size(); ++i) (*ga)[i] += go[i] * vb2[i];
    if (Tensor* gb = gr.grad_or_null(b))
      for (size_t i = 0; i < go.data.size(); ++i) (*gb)[i] += go[i] * va[i];
  });
}

int scale(Graph& g, int a, double c) {
  Tensor out = g.val(a);
  for (double& v : out.data) v *= c;
  return g.add(std::move(out), {a}, [a, c](Graph& gr, int self) {
    const Tensor& go = *gr.grad_or_null(self);
    if (Tensor* ga = gr.grad_or_null(a))
      for (size_t i = 0; i < go.data.size(); ++i) (*ga)[i] += c * go[i];
  });
}

int relu(Graph& g, int a) {
  Tensor out = g.val(a);
  for (double& v : out.data) v = v > 0.0 ? v : 0.0;
  return g.add(std::move(out), {a}, [a](Graph& gr, int self) {
    const Tensor& go = *gr.grad_or_null(self);
    const Tensor& va = gr.val(a);
    if (Tensor* ga = gr.grad_or_null(a))
      for (size_t i = 0; i < go.data.size(); ++i)
        if (va[i] > 0.0) (*ga)[i] += go[i];
  });
}

int matmul(Graph& g, int a, int b) {
  const Tensor& va = g.val(a);
  const Tensor& vb = g.val(b);
  require(va.ndim() == 2 && vb.ndim() == 2 && va.dim(1) == vb.dim(0),
          "matmul: incompatible ", va.shape_str(), " x ", vb.shape_str());
  Tensor out({va.dim(0), vb.dim(1)});
  map2(out).noalias() = map2(va) * map2(vb);
  return g.add(std::move(out), {a, b}, [a, b](Graph& gr, int self) {
    const Tensor& go = *gr.grad_or_null(self);
    if (Tensor* ga = gr.grad_or_null(a))
      map2(*ga).noalias() += map2(go) * map2(gr.val(b)).transpose();
    if (Tensor* gb = gr.grad_or_null(b))
      map2(*gb).noalias() += map2(gr.val(a)).transpose() * map2(go);
  });
}

int matmul_nt(Graph& g, int a, int b) {
  const Tensor& va = g.val(a);
  const Tensor& vb = g.val(b);
  require(va.ndim() == 2 && vb.ndim() == 2 && va.dim(1) == vb.dim(1),
          "matmul_nt: incompatible ", va.shape_str(), " x ", vb.shape_str(),
          "^T");
  Tensor out({va.dim(0), vb.dim(0)});
  map2(out).noalias() = map2(va) * map2(vb).transpose();
  return g.add(std::move(out), {a, b}, [a, b](Graph& gr, int self) {
    const Tensor& go = *gr.grad_or_null(self);
    if (Tensor* ga = gr.grad_or_null(a))
      map2(*ga).noalias() += map2(go) * map2(gr.val(b));
    if (Tensor* gb = gr.grad_or_null(b))
      map2(*gb).noalias() += map2(go).transpose() * map2(gr.val(a));
  });
}

int add_row_bias(Graph& g, int m, int bias) {
  const Tensor& vm = g.val(m);
  const Tensor& vb = g.val(bias);
  require(vm.ndim() == 2 && vb.numel() == vm.dim(1),
          "add_row_bias: bias length ", vb.numel(), " vs ", vm.shape_str());
  Tensor out = vm;
  const int r = vm.dim(0), c = vm.dim(1);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) out.at(i, j) += vb[static_cast<size_t>(j)];
  return g.add(std::move(out), {m, bias}, [m, bias, r, c](Graph& gr, int self) {
    const Tensor& go = *gr.grad_or_null(self);
    if (Tensor* gm = gr.grad_or_null(m))
      for (size_t i = 0; i < go.data.size(); ++i) (*gm)[i] += go[i];
    if (Tensor* gb = gr.grad_or_null(bias))
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) (*gb)[static_cast<size_t>(j)] += go.at(i, j);
  });
}

int reshape(Graph& g, int x, std::vector<int> shape) {
  const Tensor& vx = g.val(x);
  require(Tensor::numel_of(shape) == vx.numel(), "reshape: numel mismatch");
  Tensor out(std::move(shape), vx.data);
  return g.add(std::move(out), {x}, [x](Graph& gr, int self) {
    const Tensor& go = *gr.grad_or_null(self);
    if (Tensor* gx = gr.grad_or_null(x))
      for (size_t i = 0; i < go.data.size(); ++i) (*gx)[i] += go[i];
  });
}

int concat_cols(Graph& g, int a, int b) {
  const Tensor& va = g.val(a);
  const Tensor& vb = g.val(b);
  require(va.ndim() == 2 && vb.ndim() == 2 && va.dim(0) == vb.dim(0),
          "concat_cols: row mismatch ", va.shape_str(), " vs ", vb.shape_str());
  const int r = va.dim(0), p = va.dim(1), q = vb.dim(1);
  Tensor out({r, p + q});
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < p; ++j) out.at(i, j) = va.at(i, j);
    for (int j = 0; j < q; ++j) out.at(i, p + j) = vb.at(i, j);
  }
  return g.add(std::move(out), {a, b}, [a, b, r, p, q](Graph& gr, int self) {
    const Tensor& go = *gr.grad_or_null(self);
    if (Tensor* ga = gr.grad_or_null(a))
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < p; ++j) ga->at(i, j) += go.at(i, j);
    if (Tensor* gb = gr.grad_or_null(b))
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < q; ++j) gb->at(i, j) += go.at(i, p + j);
  });
}

int slice_rows(Graph& g, int x, int r0, int r1) {
  const Tensor& vx = g.val(x);
  require(vx.ndim() == 2 && 0 <= r0 && r0 < r1 && r1 <= vx.dim(0),
          "slice_rows: bad range [", r0, ", ", r1, ") for ", vx.shape_str());
  const int c = vx.dim(1);
  Tensor out({r1 - r0, c});
  std::copy(vx.data.begin() + static_cast<size_t>(r0) * c,
            vx.data.begin() + static_cast<size_t>(r1) * c, out.data.begin());
  return g.add(std::move(out), {x}, [x, r0, c](Graph& gr, int self) {
    const Tensor& go = *gr.grad_or_null(self);
    if (Tensor* gx = gr.grad_or_null(x)) {
      double* dst = gx->data.data() + static_cast<size_t>(r0) * c;
      for (size_t i = 0; i < go.data.size(); ++i) dst[i] += go[i];
    }
  });
}

int mask_rows(Graph& g, int x, int valid) {
  const Tensor& vx = g.val(x);
  require(vx.ndim() == 2 && valid >= 0 && valid <= vx.dim(0),
          "mask_rows: valid ", valid, " out of range for ", vx.shape_str());
  const int c = vx.dim(1);
  Tensor out = vx;
  std::fill(out.data.begin() + static_cast<size_t>(valid) * c, out.data.end(),
            0.0);
  return g.add(std::move(out), {x}, [x, valid, c](Graph& gr, int self) {
    const Tensor& go = *gr.grad_or_null(self);
    if (Tensor* gx = gr.grad_or_null(x)) {
      const size_t n = static_cast<size_t>(valid) * c;
      for (size_t i = 0; i < n; ++i) (*gx)[i] += go[i];
    }
  });
}

int pad_rows(Graph& g, int x, int rows_total) {
  const Tensor& vx = g.val(x);
  require(vx.ndim() == 2 && rows_total >= vx.dim(0), "pad_rows: target ",
          rows_total, " smaller than ", vx.shape_str());
  const int c = vx.dim(1);
  Tensor out({rows_total, c});
  std::copy(vx.data.begin(), vx.data.end(), out.data.begin());
  return g.add(std::move(out), {x}, [x](Graph& gr, int self) {
    const Tensor& go = *gr.grad_or_null(self);
    if (Tensor* gx = gr.grad_or_null(x))
      for (size_t i = 0; i < gx->data.size(); ++i) (*gx)[i] += go[i];
  });
}

int rows_to_image(Graph& g, int x) {
  const Tensor& vx = g.val(x);
  require(vx.ndim() == 2, "rows_to_image: want 2-D, got ", vx.shape_str());
  const int t = vx.dim(0), d = vx.dim(1);
  Tensor out({1, 1, d, t});
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < d; ++j)
      out[static_cast<size_t>(j) * t + i] = vx.at(i, j);
  return g.add(std::move(out), {x}, [x, t, d](Graph& gr, int self) {
    const Tensor& go = *gr.grad_or_null(self);
    if (Tensor* gx = gr.grad_or_null(x))
      for (int i = 0; i < t; ++i)
        for (int j = 0; j < d; ++j)
          gx->at(i, j) += go[static_cast<size_t>(j) * t + i];
  });
}

int image_to_rows(Graph& g, int x) {
  const Tensor& vx = g.val(x);
  require(vx.ndim() == 4 && vx.dim(0) == 1, "image_to_rows: want [1,C,D,T], got ",
          vx.shape_str());
  const int ch = vx.dim(1), d = vx.dim(2), t = vx.dim(3);
  Tensor out({t, ch * d});
  for (int c = 0; c < ch; ++c)
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < t; ++i)
        out.at(i, c * d + j) = vx[(static_cast<size_t>(c) * d + j) * t + i];
  return g.add(std::move(out), {x}, [x, ch, d, t](Graph& gr, int self) {
    const Tensor& go = *gr.grad_or_null(self);
    if (Tensor* gx = gr.grad_or_null(x))
      for (int c = 0; c < ch; ++c)
        for (int j = 0; j < d; ++j)
          for (int i = 0; i < t; ++i)
            (*gx)[(static_cast<size_t>(c) * d + j) * t + i] +=
                go.at(i, c * d + j);
  });
}

int time_to_batch(Graph& g, int x) {
  const Tensor& vx = g.val(x);
  require(vx.ndim() == 4, "time_to_batch: want [C,M,H,W], got ", vx.shape_str());
  const int c = vx.dim(0), m = vx.dim(1);
  const size_t hw = static_cast<size_t>(vx.dim(2)) * vx.dim(3);
  Tensor out({m, c, vx.dim(2), vx.dim(3)});
  for (int i = 0; i < c; ++i)
    for (int j = 0; j < m; ++j)
      std::copy(vx.data.begin() + (static_cast<size_t>(i) * m + j) * hw,
                vx.data.begin() + (static_cast<size_t>(i) * m + j + 1) * hw,
                out.data.begin() + (static_cast<size_t>(j) * c + i) * hw);
  return g.add(std::move(out), {x}, [x, c, m, hw](Graph& gr, int self) {
    const Tensor& go = *gr.grad_or_null(self);
    if (Tensor* gx = gr.grad_or_null(x))
      for (int i = 0; i < c; ++i)
        for (int j = 0; j < m; ++j) {
          const double* src = go.data.data() + (static_cast<size_t>(j) * c + i) * hw;
          double* dst = gx->data.data() + (static_cast<size_t>(i) * m + j) * hw;
          for (size_t k = 0; k < hw; ++k) dst[k] += src[k];
        }
  });
}

int mask_time_cols(Graph& g, int x, int valid) {
  const Tensor& vx = g.val(x);
  require(vx.ndim() == 4 && valid >= 0 && valid <= vx.dim(3),
          "mask_time_cols: valid ", valid, " out of range for ", vx.shape_str());
  const int w = vx.dim(3);
  const size_t nrows = vx.data.size() / static_cast<size_t>(w);
  Tensor out = vx;
  for (size_t r = 0; r < nrows; ++r)
    std::fill(out.data.begin() + r * w + valid, out.data.begin() + (r + 1) * w,
              0.0);
  return g.add(std::move(out), {x}, [x, valid, w, nrows](Graph& gr, int self) {
    const Tensor& go = *gr.grad_or_null(self);
    if (Tensor* gx = gr.grad_or_null(x))
      for (size_t r = 0; r < nrows; ++r)
        for (int i = 0; i < valid; ++i)
          (*gx)[r * w + i] += go[r * w + i];
  });
}

namespace {
int reflect_symmetric(int i, int m) {
  while (i < 0 || i >= m) {
    if (i < 0) i = -i - 1;
    if (i >= m) i = 2 * m - 1 - i;
  }
  return i;
}
}  // namespace

int pad_time_symmetric(Graph& g, int x, int pad) {
  const Tensor& vx = g.val(x);
  require(vx.ndim() == 4 && pad >= 0, "pad_time_symmetric: want [C,M,H,W]");
  const int c = vx.dim(0), m = vx.dim(1);
  const size_t hw = static_cast<size_t>(vx.dim(2)) * vx.dim(3);
  std::vector<int> src(static_cast<size_t>(m + 2 * pad));
  for (int t = 0; t < m + 2 * pad; ++t)
    src[static_cast<size_t>(t)] = reflect_symmetric(t - pad, m);
  Tensor out({c, m + 2 * pad, vx.dim(2), vx.dim(3)});
  for (int ci = 0; ci < c; ++ci)
    for (int t = 0; t < m + 2 * pad; ++t)
      std::copy(vx.data.begin() + (static_cast<size_t>(ci) * m + src[t]) * hw,
                vx.data.begin() + (static_cast<size_t>(ci) * m + src[t] + 1) * hw,
                out.data.begin() +
                    (static_cast<size_t>(ci) * (m + 2 * pad) + t) * hw);
  return g.add(std::move(out), {x}, [x, c, m, pad, hw, src](Graph& gr, int self) {
    const Tensor& go = *gr.grad_or_null(self);
    if (Tensor* gx = gr.grad_or_null(x))
      for (int ci = 0; ci < c; ++ci)
        for (int t = 0; t < m + 2 * pad; ++t) {
          const double* s = go.data.data() +
              (static_cast<size_t>(ci) * (m + 2 * pad) + t) * hw;
          double* d = gx->data.data() +
              (static_cast<size_t>(ci) * m + src[static_cast<size_t>(t)]) * hw;
          for (size_t i = 0; i < hw; ++i) d[i] += s[i];
        }
  });
}

int slice_batch(Graph& g, int x, int n0, int n1) {
  const Tensor& vx = g.val(x);
  require(vx.ndim() == 4 && 0 <= n0 && n0 < n1 && n1 <= vx.dim(0),
          "slice_batch: bad range [", n0, ", ", n1, ") for ", vx.shape_str());
  const size_t per = static_cast<size_t>(vx.dim(1)) * vx.dim(2) * vx.dim(3);
  Tensor out({n1 - n0, vx.dim(1), vx.dim(2), vx.dim(3)});
  std::copy(vx.data.begin() + n0 * per, vx.data.begin() + n1 * per,
            out.data.begin());
  return g.add(std::move(out), {x}, [x, n0, per](Graph& gr, int self) {
    const Tensor& go = *gr.grad_or_null(self);
    if (Tensor* gx = gr.grad_or_null(x)) {
      double* dst = gx->data.data() + n0 * per;
      for (size_t i = 0; i < go.data.size(); ++i) dst[i] += go[i];
    }
  });
}

int mean_rows_masked(Graph& g, int x, int valid) {
  const Tensor& vx = g.val(x);
  require((vx.ndim() == 1 || (vx.ndim() == 2 && vx.dim(1) == 1)),
          "mean_rows_masked: want a column, got ", vx.shape_str());
  require(valid >= 1 && valid <= vx.dim(0), "mean_rows_masked: valid ", valid,
          " out of range for ", vx.shape_str());
  double s = 0.0;
  for (int i = 0; i < valid; ++i) s += vx[static_cast<size_t>(i)];
  Tensor out({1});
  out[0] = s / valid;
  return g.add(std::move(out), {x}, [x, valid](Graph& gr, int self) {
    const double go = (*gr.grad_or_null(self))[0];
    if (Tensor* gx = gr.grad_or_null(x)) {
      const double w = go / valid;
      for (int i = 0; i < valid; ++i) (*gx)[static_cast<size_t>(i)] += w;
    }
  });
}

int upsample_rows_linear(Graph& g, int emb, int t_out) {
  const Tensor& ve = g.val(emb);
  require(ve.ndim() == 2 && ve.dim(0) >= 1, "upsample: want [M,d], got ",
          ve.shape_str());
  require(t_out >= 1, "upsample: t_out must be positive");
  const int m = ve.dim(0), d = ve.dim(1);
  // Precompute (lo, hi, frac) per output row. When m == t_out each position
  // t*(m-1)/(t_out-1) is exactly integral, so rows copy bit-for-bit.
  std::vector<int> lo(static_cast<size_t>(t_out)), hi(static_cast<size_t>(t_out));
  std::vector<double> frac(static_cast<size_t>(t_out));
  for (int t = 0; t < t_out; ++t) {
    double pos = 0.0;
    if (m > 1 && t_out > 1)
      pos = static_cast<double>(t) * (m - 1) / (t_out - 1);
    int l = static_cast<int>(pos);
    if (l >= m - 1) {
      l = m - 1;
      lo[t] = hi[t] = l;
      frac[t] = 0.0;
    } else {
      lo[t] = l;
      hi[t] = l + 1;
      frac[t] = pos - l;
    }
  }
  Tensor out({t_out, d});
  for (int t = 0; t < t_out; ++t) {
    const double f = frac[t];
    const double* a = ve.data.data() + static_cast<size_t>(lo[t]) * d;
    const double* b = ve.data.data() + static_cast<size_t>(hi[t]) * d;
    double* o = out.data.data() + static_cast<size_t>(t) * d;
    if (f == 0.0) {
      std::copy(a, a + d, o);
    } else {
      for (int j = 0; j < d; ++j) o[j] = (1.0 - f) * a[j] + f * b[j];
    }
  }
  return g.add(std::move(out), {emb},
               [emb, lo, hi, frac, d, t_out](Graph& gr, int self) {
    const Tensor& go = *gr.grad_or_null(self);
    if (Tensor* ge = gr.grad_or_null(emb))
      for (int t = 0; t < t_out; ++t) {
        const double f = frac[static_cast<size_t>(t)];
        const double* o = go.data.data() + static_cast<size_t>(t) * d;
        double* a = ge->data.data() + static_cast<size_t>(lo[static_cast<size_t>(t)]) * d;
        double* b = ge->data.data() + static_cast<size_t>(hi[static_cast<size_t>(t)]) * d;
        for (int j = 0; j < d; ++j) {
          a[j] += (1.0 - f) * o[j];
          if (f != 0.0) b[j] += f * o[j];
        }
      }
  });
}

}  // namespace nn
}  // namespace avsqa
