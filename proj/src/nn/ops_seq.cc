// nn/ops_seq.cc

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
#include <memory>

#include "common/error.h"
#include "nn/ops.h"

namespace avsqa {
namespace nn {

namespace {

using MatRM = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Activations and cell states saved by the forward pass for BPTT.
struct LstmStash {
  MatRM gates;  // [T,4H], post-activation (i, f, g, o)
  MatRM cell;   // [T,H]
  MatRM tanc;   // [T,H], tanh(cell)
};

}  // namespace

int lstm_dir(Graph& g, int x, int wx, int wh, int b, int valid_t,
             bool reverse) {
  const Tensor& vx = g.val(x);
  const Tensor& vwx = g.val(wx);
  const Tensor& vwh = g.val(wh);
  const Tensor& vb = g.val(b);
  require(vx.ndim() == 2 && vwx.ndim() == 2 && vwh.ndim() == 2,
          "lstm: want x [T,Din], wx [4H,Din], wh [4H,H]");
  const int t_pad = vx.dim(0), din = vx.dim(1);
  const int hh = vwh.dim(1);
  require(vwx.dim(0) == 4 * hh && vwh.dim(0) == 4 * hh && vwx.dim(1) == din &&
              vb.numel() == 4 * hh,
          "lstm: inconsistent parameter shapes ", vwx.shape_str(), " ",
          vwh.shape_str(), " bias ", vb.numel(), " input ", vx.shape_str());
  require(valid_t >= 1 && valid_t <= t_pad, "lstm: valid_t ", valid_t,
          " out of range for ", vx.shape_str());

  Eigen::Map<const MatRM> xm(vx.data.data(), t_pad, din);
  Eigen::Map<const MatRM> wxm(vwx.data.data(), 4 * hh, din);
  Eigen::Map<const MatRM> whm(vwh.data.data(), 4 * hh, hh);

  // One GEMM for the input contribution of every step, then the recurrence.
  MatRM xz = xm.topRows(valid_t) * wxm.transpose();  // [valid,4H]

  auto st = std::make_shared<LstmStash>();
  st->gates.setZero(valid_t, 4 * hh);
  st->cell.setZero(valid_t, hh);
  st->tanc.setZero(valid_t, hh);

  Tensor out({t_pad, hh});
  Eigen::VectorXd h = Eigen::VectorXd::Zero(hh);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(hh);
  Eigen::VectorXd z(4 * hh);
  for (int s = 0; s < valid_t; ++s) {
    const int t = reverse ? valid_t - 1 - s : s;
    z = xz.row(t).transpose() + whm * h;
    for (int j = 0; j < 4 * hh; ++j) z[j] += vb[static_cast<size_t>(j)];
    for (int j = 0; j < hh; ++j) {
      const double gi = sigmoid(z[j]);
      const double gf = sigmoid(z[hh + j]);
      const double gg = std::tanh(z[2 * hh + j]);
      const double go = sigmoid(z[3 * hh + j]);
      c[j] = gf * c[j] + gi * gg;
      const double th = std::tanh(c[j]);
      h[j] = go * th;
      st->gates(s, j) = gi;
      st->gates(s, hh + j) = gf;
      st->gates(s, 2 * hh + j) = gg;
      st->gates(s, 3 * hh + j) = go;
      st->cell(s, j) = c[j];
      st->tanc(s, j) = th;
    }
    for (int j = 0; j < hh; ++j) out.at(t, j) = h[j];
  }

  return g.add(std::move(out), {x, wx, wh, b},
               [x, wx, wh, b, valid_t, reverse, t_pad, din, hh,
                st](Graph& gr, int self) {
    const Tensor& go = *gr.grad_or_null(self);
    Tensor* gx = gr.grad_or_null(x);
    Tensor* gwx = gr.grad_or_null(wx);
    Tensor* gwh = gr.grad_or_null(wh);
    Tensor* gb = gr.grad_or_null(b);
    if (!gx && !gwx && !gwh && !gb) return;

    Eigen::Map<const MatRM> xm(gr.val(x).data.data(), t_pad, din);
    Eigen::Map<const MatRM> whm(gr.val(wh).data.data(), 4 * hh, hh);
    MatRM dz_all = MatRM::Zero(valid_t, 4 * hh);  // by physical row t
    Eigen::VectorXd dh_carry = Eigen::VectorXd::Zero(hh);
    Eigen::VectorXd dc_carry = Eigen::VectorXd::Zero(hh);
    Eigen::VectorXd dz(4 * hh);

    for (int s = valid_t - 1; s >= 0; --s) {
      const int t = reverse ? valid_t - 1 - s : s;
      for (int j = 0; j < hh; ++j) {
        const double gi = st->gates(s, j);
        const double gf = st->gates(s, hh + j);
        const double gg = st->gates(s, 2 * hh + j);
        const double goo = st->gates(s, 3 * hh + j);
        const double th = st->tanc(s, j);
        const double c_prev = s > 0 ? st->cell(s - 1, j) : 0.0;
        const double dh = go.at(t, j) + dh_carry[j];
        const double dc = dh * goo * (1.0 - th * th) + dc_carry[j];
        dz[j] = dc * gg * gi * (1.0 - gi);
        dz[hh + j] = dc * c_prev * gf * (1.0 - gf);
        dz[2 * hh + j] = dc * gi * (1.0 - gg * gg);
        dz[3 * hh + j] = dh * th * goo * (1.0 - goo);
        dc_carry[j] = dc * gf;
      }
      dz_all.row(t) = dz.transpose();
      if (gb)
        for (int j = 0; j < 4 * hh; ++j) (*gb)[static_cast<size_t>(j)] += dz[j];
      if (gwh && s > 0) {
        const int tp = reverse ? valid_t - 1 - (s - 1) : s - 1;
        Eigen::Map<MatRM> gwhm(gwh->data.data(), 4 * hh, hh);
        const Tensor& vout = gr.val(self);
        for (int r = 0; r < 4 * hh; ++r)
          for (int j = 0; j < hh; ++j) gwhm(r, j) += dz[r] * vout.at(tp, j);
      }
      dh_carry = whm.transpose() * dz;
    }
    if (gwx)
      Eigen::Map<MatRM>(gwx->data.data(), 4 * hh, din).noalias() +=
          dz_all.transpose() * xm.topRows(valid_t);
    if (gx)
      Eigen::Map<MatRM>(gx->data.data(), t_pad, din).topRows(valid_t).noalias() +=
          dz_all * Eigen::Map<const MatRM>(gr.val(wx).data.data(), 4 * hh, din);
  });
}

int softmax_rows_masked(Graph& g, int scores, int valid) {
  const Tensor& vs = g.val(scores);
  require(vs.ndim() == 2 && vs.dim(0) == vs.dim(1),
          "softmax: want square [T,T], got ", vs.shape_str());
  require(valid >= 1 && valid <= vs.dim(0), "softmax: valid ", valid,
          " out of range for ", vs.shape_str());
  const int t = vs.dim(0);
  Tensor out({t, t});
  for (int r = 0; r < valid; ++r) {
    double mx = vs.at(r, 0);
    for (int j = 1; j < valid; ++j) mx = std::max(mx, vs.at(r, j));
    double z = 0.0;
    for (int j = 0; j < valid; ++j) {
      const double e = std::exp(vs.at(r, j) - mx);
      out.at(r, j) = e;
      z += e;
    }
    for (int j = 0; j < valid; ++j) out.at(r, j) /= z;
  }
  return g.add(std::move(out), {scores}, [scores, valid](Graph& gr, int self) {
    const Tensor& go = *gr.grad_or_null(self);
    const Tensor& a = gr.val(self);
    if (Tensor* gs = gr.grad_or_null(scores))
      for (int r = 0; r < valid; ++r) {
        double dot = 0.0;
        for (int j = 0; j < valid; ++j) dot += go.at(r, j) * a.at(r, j);
        for (int j = 0; j < valid; ++j)
          gs->at(r, j) += a.at(r, j) * (go.at(r, j) - dot);
      }
  });
}

}  // namespace nn
}  // namespace avsqa
