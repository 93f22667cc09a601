// nn/ops.h

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

#ifndef AVSQA_NN_OPS_H_
#define AVSQA_NN_OPS_H_

#include <array>
#include <vector>

#include "nn/graph.h"
#include "nn/tensor.h"

namespace avsqa {
namespace nn {

// Leaves. `constant` never receives gradients; `variable` does (parameters,
// or inputs whose gradient a test wants to inspect).
int constant(Graph& g, Tensor value);
int variable(Graph& g, Tensor value);

// ---- Elementwise / linear algebra ----------------------------------------

int add(Graph& g, int a, int b);        // same shape
int sub(Graph& g, int a, int b);        // same shape
int mul(Graph& g, int a, int b);        // same shape, Hadamard
int scale(Graph& g, int a, double c);   // c * a
int relu(Graph& g, int a);

int matmul(Graph& g, int a, int b);     // [m,k] x [k,n] -> [m,n]
int matmul_nt(Graph& g, int a, int b);  // [m,k] x [n,k]^T -> [m,n]

// rows: [r,c] matrix plus a length-c bias added to every row.
int add_row_bias(Graph& g, int m, int bias);

// ---- Shape plumbing --------------------------------------------------------

int reshape(Graph& g, int x, std::vector<int> shape);  // numel preserved
int concat_cols(Graph& g, int a, int b);               // [r,p]+[r,q] -> [r,p+q]
int slice_rows(Graph& g, int x, int r0, int r1);       // rows [r0, r1)
// Zeroes rows >= valid of a 2-D tensor (suffix padding convention).
int mask_rows(Graph& g, int x, int valid);
// Appends zero rows so the result has `rows_total` rows.
int pad_rows(Graph& g, int x, int rows_total);

// [T,D] time-major rows -> [1,1,D,T] single-channel image (feature = height,
// time = width), and the inverse used after the conv trunk:
// [1,C,Dr,T] -> [T, C*Dr].
int rows_to_image(Graph& g, int x);
int image_to_rows(Graph& g, int x);

// [C,M,H,W] -> [M,C,H,W]: video frames become the batch axis for the
// per-frame 2-D stack.
int time_to_batch(Graph& g, int x);
// Zeroes the time columns w >= valid of a [N,C,H,W] tensor (the CRNN keeps
// time on the W axis).
int mask_time_cols(Graph& g, int x, int valid);
// Extends a [C,M,H,W] tensor by `pad` frames of symmetric reflection at both
// temporal ends (… f1 f0 | f0 f1 … | fM-1 fM-2 …), so a temporally constant
// clip stays constant through a temporal convolution.
int pad_time_symmetric(Graph& g, int x, int pad);
// Keeps samples [n0, n1) of a [N,C,H,W] tensor.
int slice_batch(Graph& g, int x, int n0, int n1);

// ---- Convolution stack -----------------------------------------------------

// x [N,C,H,W], w [K,C,kh,kw], bias [K] (pass -1 for none) -> [N,K,H',W'].
// Zero padding; implemented as chunked im2col + GEMM, with the column block
// recomputed in the backward pass instead of being stored.
int conv2d(Graph& g, int x, int w, int bias, int stride_h, int stride_w,
           int pad_h, int pad_w);

// x [C,M,H,W], w [K,C,kt,kh,kw], bias [K] or -1 -> [K,M',H',W'].
int conv3d(Graph& g, int x, int w, int bias, std::array<int, 3> stride,
           std::array<int, 3> pad);

// x [N,C,H,W]; window k, square stride, zero pad (padded positions are
// excluded from the max, ties resolve to the first position in scan order).
int maxpool2d(Graph& g, int x, int k, int stride, int pad);

// Per-sample channel normalization: statistics per (n, c) over H*W, then an
// affine with learnable gamma/beta of shape [C]. Deterministic per sample;
// this is the normalization used everywhere a batch statistic would
// otherwise make results depend on batch composition.
int channel_norm2d(Graph& g, int x, int gamma, int beta);

// Same for a [C,M,H,W] video tensor with suffix padding: statistics per
// channel over valid_m*H*W, padded frames forced to zero.
int channel_norm3d_masked(Graph& g, int x, int gamma, int beta, int valid_m);

int global_avg_pool2d(Graph& g, int x);  // [N,C,H,W] -> [N,C]

// ---- Sequence ops ----------------------------------------------------------

// Single-direction LSTM. x [T,Din] (rows >= valid_t are padding and are
// ignored), wx [4H,Din], wh [4H,H], b [4H]; gate order (i, f, g, o).
// Initial state is zero. Output [T,H]; padded rows are zero. `reverse` runs
// the recurrence from the last valid frame toward the first.
int lstm_dir(Graph& g, int x, int wx, int wh, int b, int valid_t,
             bool reverse);

// Row-stochastic softmax of a [T,T] score matrix restricted to the leading
// valid x valid block; everything else (padded queries and padded keys) is
// zero. Equivalent to adding -inf to padded keys before the softmax.
int softmax_rows_masked(Graph& g, int scores, int valid);

// Mean over the first `valid` rows of a [T,1] (or length-T) tensor -> [1].
int mean_rows_masked(Graph& g, int x, int valid);

// Linear time upsampling: emb [M,d] -> [t_out,d]; output row t samples the
// source at position t*(M-1)/(t_out-1) with linear interpolation. Endpoints
// map exactly; M == 1 broadcasts; M == t_out copies rows bit-for-bit.
int upsample_rows_linear(Graph& g, int emb, int t_out);

}  // namespace nn
}  // namespace avsqa

#endif  // AVSQA_NN_OPS_H_
