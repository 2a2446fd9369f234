#pragma once

#include <vector>

#include "rgop/ad/tensor.hpp"

namespace rgop::ad::kernels {

// Forward/backward math shared by the tape and the no-grad inference path.
// All gradient functions accumulate into their outputs (+=), which must be
// pre-sized and zeroed by the caller.

Tensor conv2d_forward(const Tensor& x, const Tensor& w, const Tensor& b, int stride);
void conv2d_backward(const Tensor& x, const Tensor& w, int stride, const Tensor& gy,
                     Tensor* gx, Tensor* gw, Tensor* gb);

/// x: [N, I] (or [I] treated as one row). w: [O, I]. b: [O].
Tensor linear_forward(const Tensor& x, const Tensor& w, const Tensor& b);
void linear_backward(const Tensor& x, const Tensor& w, const Tensor& gy, Tensor* gx,
                     Tensor* gw, Tensor* gb);

Tensor relu_forward(const Tensor& x);
Tensor sigmoid_forward(const Tensor& x);
Tensor tanh_forward(const Tensor& x);

/// [N, C, H, W] -> [N, C], mean over the spatial axes.
Tensor mean_pool_hw_forward(const Tensor& x);

/// Nearest-neighbour 2x upsampling, [N, C, H, W] -> [N, C, 2H, 2W].
Tensor upsample2x_forward(const Tensor& x);

struct LstmSaved {
  Tensor i, f, g, o;  // post-activation gates
  Tensor c_new, tanh_c;
};

/// Standard LSTM cell on vectors: x [I], h/c [H], wx [4H, I], wh [4H, H],
/// b [4H]; gate order (i, f, g, o).
void lstm_cell_forward(const Tensor& x, const Tensor& h_prev, const Tensor& c_prev,
                       const Tensor& wx, const Tensor& wh, const Tensor& b, Tensor* h_out,
                       Tensor* c_out, LstmSaved* saved);

void lstm_cell_backward(const Tensor& x, const Tensor& h_prev, const Tensor& c_prev,
                        const Tensor& wx, const Tensor& wh, const LstmSaved& saved,
                        const Tensor& gh, const Tensor& gc, Tensor* gx, Tensor* gh_prev,
                        Tensor* gc_prev, Tensor* gwx, Tensor* gwh, Tensor* gb);

/// Row-wise softmax of [N, C] (or [C]).
Tensor softmax(const Tensor& logits);

/// a^T * b for a [N, D1], b [N, D2] -> [D1, D2].
Tensor matmul_tn(const Tensor& a, const Tensor& b);

}  // namespace rgop::ad::kernels
