#include "rgop/ad/kernels.hpp"

#include <Eigen/Core>

#include <cmath>

#include "rgop/errors.hpp"

namespace rgop::ad::kernels {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<RowMat>;
using ConstMapMat = Eigen::Map<const RowMat>;
using MapVec = Eigen::Map<Eigen::VectorXd>;
using ConstMapVec = Eigen::Map<const Eigen::VectorXd>;

struct ConvDims {
  int n, c, h, w, oc, k, s, oh, ow;
};

ConvDims conv_dims(const Tensor& x, const Tensor& w, int stride) {
  if (x.ndim() != 4) throw DimensionError("conv2d input must be [N,C,H,W]");
  if (w.ndim() != 4) throw DimensionError("conv2d weight must be [OC,C,K,K]");
  ConvDims d;
  d.n = x.dim(0);
  d.c = x.dim(1);
  d.h = x.dim(2);
  d.w = x.dim(3);
  d.oc = w.dim(0);
  d.k = w.dim(2);
  d.s = stride;
  if (w.dim(1) != d.c) throw DimensionError("conv2d channel mismatch");
  if (w.dim(3) != d.k) throw DimensionError("conv2d kernel must be square");
  if (stride < 1) throw ArgumentError("conv2d stride must be >= 1");
  if (d.h < d.k || d.w < d.k) throw DimensionError("conv2d input smaller than kernel");
  d.oh = (d.h - d.k) / d.s + 1;
  d.ow = (d.w - d.k) / d.s + 1;
  return d;
}

// Columns are output pixels; rows iterate (c, ky, kx).
void im2col(const double* x, const ConvDims& d, double* col) {
  const int patch = d.c * d.k * d.k;
  for (int c = 0; c < d.c; ++c)
    for (int ky = 0; ky < d.k; ++ky)
      for (int kx = 0; kx < d.k; ++kx) {
        const int r = (c * d.k + ky) * d.k + kx;
        double* dst = col + static_cast<std::size_t>(r) * d.oh * d.ow;
        const double* src = x + (static_cast<std::size_t>(c) * d.h + ky) * d.w + kx;
        for (int oy = 0; oy < d.oh; ++oy) {
          const double* row = src + static_cast<std::size_t>(oy) * d.s * d.w;
          for (int ox = 0; ox < d.ow; ++ox) dst[oy * d.ow + ox] = row[ox * d.s];
        }
      }
  (void)patch;
}

void col2im_accum(const double* col, const ConvDims& d, double* gx) {
  for (int c = 0; c < d.c; ++c)
    for (int ky = 0; ky < d.k; ++ky)
      for (int kx = 0; kx < d.k; ++kx) {
        const int r = (c * d.k + ky) * d.k + kx;
        const double* src = col + static_cast<std::size_t>(r) * d.oh * d.ow;
        double* dst = gx + (static_cast<std::size_t>(c) * d.h + ky) * d.w + kx;
        for (int oy = 0; oy < d.oh; ++oy) {
          double* row = dst + static_cast<std::size_t>(oy) * d.s * d.w;
          for (int ox = 0; ox < d.ow; ++ox) row[ox * d.s] += src[oy * d.ow + ox];
        }
      }
}

}  // namespace

Tensor conv2d_forward(const Tensor& x, const Tensor& w, const Tensor& b, int stride) {
  const ConvDims d = conv_dims(x, w, stride);
  if (b.ndim() != 1 || b.dim(0) != d.oc) throw DimensionError("conv2d bias must be [OC]");

  Tensor y({d.n, d.oc, d.oh, d.ow});
  const int patch = d.c * d.k * d.k;
  const int pixels = d.oh * d.ow;
  std::vector<double> col(static_cast<std::size_t>(patch) * pixels);
  ConstMapMat wmat(w.data(), d.oc, patch);

  const std::size_t x_stride = static_cast<std::size_t>(d.c) * d.h * d.w;
  const std::size_t y_stride = static_cast<std::size_t>(d.oc) * pixels;
  for (int n = 0; n < d.n; ++n) {
    im2col(x.data() + n * x_stride, d, col.data());
    ConstMapMat cmat(col.data(), patch, pixels);
    MapMat ymat(y.data() + n * y_stride, d.oc, pixels);
    ymat.noalias() = wmat * cmat;
    for (int o = 0; o < d.oc; ++o) ymat.row(o).array() += b[static_cast<std::size_t>(o)];
  }
  return y;
}

void conv2d_backward(const Tensor& x, const Tensor& w, int stride, const Tensor& gy,
                     Tensor* gx, Tensor* gw, Tensor* gb) {
  const ConvDims d = conv_dims(x, w, stride);
  const int patch = d.c * d.k * d.k;
  const int pixels = d.oh * d.ow;
  std::vector<double> col(static_cast<std::size_t>(patch) * pixels);
  std::vector<double> gcol(col.size());
  ConstMapMat wmat(w.data(), d.oc, patch);

  const std::size_t x_stride = static_cast<std::size_t>(d.c) * d.h * d.w;
  const std::size_t y_stride = static_cast<std::size_t>(d.oc) * pixels;
  for (int n = 0; n < d.n; ++n) {
    ConstMapMat gymat(gy.data() + n * y_stride, d.oc, pixels);
    if (gw || gb) im2col(x.data() + n * x_stride, d, col.data());
    if (gw) {
      ConstMapMat cmat(col.data(), patch, pixels);
      MapMat gwmat(gw->data(), d.oc, patch);
      gwmat.noalias() += gymat * cmat.transpose();
    }
    if (gb) {
      MapVec gbvec(gb->data(), d.oc);
      gbvec.noalias() += gymat.rowwise().sum();
    }
    if (gx) {
      MapMat gcmat(gcol.data(), patch, pixels);
      gcmat.noalias() = wmat.transpose() * gymat;
      col2im_accum(gcol.data(), d, gx->data() + n * x_stride);
    }
  }
}

namespace {

// Treats [I] as a single row [1, I].
std::pair<int, int> rows_cols(const Tensor& x) {
  if (x.ndim() == 1) return {1, x.dim(0)};
  if (x.ndim() == 2) return {x.dim(0), x.dim(1)};
  throw DimensionError("expected a vector or matrix");
}

}  // namespace

Tensor linear_forward(const Tensor& x, const Tensor& w, const Tensor& b) {
  const auto [n, in] = rows_cols(x);
  if (w.ndim() != 2 || w.dim(1) != in) throw DimensionError("linear weight mismatch");
  const int out = w.dim(0);
  if (b.ndim() != 1 || b.dim(0) != out) throw DimensionError("linear bias mismatch");

  Tensor y(x.ndim() == 1 ? std::vector<int>{out} : std::vector<int>{n, out});
  ConstMapMat xm(x.data(), n, in);
  ConstMapMat wm(w.data(), out, in);
  MapMat ym(y.data(), n, out);
  ym.noalias() = xm * wm.transpose();
  ConstMapVec bv(b.data(), out);
  ym.rowwise() += bv.transpose();
  return y;
}

void linear_backward(const Tensor& x, const Tensor& w, const Tensor& gy, Tensor* gx,
                     Tensor* gw, Tensor* gb) {
  const auto [n, in] = rows_cols(x);
  const int out = w.dim(0);
  ConstMapMat xm(x.data(), n, in);
  ConstMapMat wm(w.data(), out, in);
  ConstMapMat gym(gy.data(), n, out);
  if (gx) {
    MapMat gxm(gx->data(), n, in);
    gxm.noalias() += gym * wm;
  }
  if (gw) {
    MapMat gwm(gw->data(), out, in);
    gwm.noalias() += gym.transpose() * xm;
  }
  if (gb) {
    MapVec gbv(gb->data(), out);
    gbv.noalias() += gym.colwise().sum().transpose();
  }
}

Tensor relu_forward(const Tensor& x) {
  Tensor y(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
  return y;
}

Tensor sigmoid_forward(const Tensor& x) {
  Tensor y(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = 1.0 / (1.0 + std::exp(-x[i]));
  return y;
}

Tensor tanh_forward(const Tensor& x) {
  Tensor y(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::tanh(x[i]);
  return y;
}

Tensor mean_pool_hw_forward(const Tensor& x) {
  if (x.ndim() != 4) throw DimensionError("mean_pool_hw input must be [N,C,H,W]");
  const int n = x.dim(0), c = x.dim(1);
  const std::size_t hw = static_cast<std::size_t>(x.dim(2)) * x.dim(3);
  Tensor y({n, c});
  const double inv = 1.0 / static_cast<double>(hw);
  for (int i = 0; i < n * c; ++i) {
    const double* src = x.data() + static_cast<std::size_t>(i) * hw;
    double acc = 0.0;
    for (std::size_t j = 0; j < hw; ++j) acc += src[j];
    y[static_cast<std::size_t>(i)] = acc * inv;
  }
  return y;
}

Tensor upsample2x_forward(const Tensor& x) {
  if (x.ndim() != 4) throw DimensionError("upsample2x input must be [N,C,H,W]");
  const int n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
  Tensor y({n, c, 2 * h, 2 * w});
  for (int nc = 0; nc < n * c; ++nc) {
    const double* src = x.data() + static_cast<std::size_t>(nc) * h * w;
    double* dst = y.data() + static_cast<std::size_t>(nc) * 4 * h * w;
    for (int yy = 0; yy < h; ++yy)
      for (int xx = 0; xx < w; ++xx) {
        const double v = src[yy * w + xx];
        double* d0 = dst + (2 * yy) * (2 * w) + 2 * xx;
        d0[0] = v;
        d0[1] = v;
        d0[2 * w] = v;
        d0[2 * w + 1] = v;
      }
  }
  return y;
}

void lstm_cell_forward(const Tensor& x, const Tensor& h_prev, const Tensor& c_prev,
                       const Tensor& wx, const Tensor& wh, const Tensor& b, Tensor* h_out,
                       Tensor* c_out, LstmSaved* saved) {
  if (x.ndim() != 1 || h_prev.ndim() != 1 || c_prev.ndim() != 1)
    throw DimensionError("lstm_cell expects vector inputs");
  const int in = x.dim(0);
  const int hidden = h_prev.dim(0);
  if (c_prev.dim(0) != hidden) throw DimensionError("lstm_cell h/c size mismatch");
  if (wx.ndim() != 2 || wx.dim(0) != 4 * hidden || wx.dim(1) != in)
    throw DimensionError("lstm_cell wx must be [4H, I]");
  if (wh.ndim() != 2 || wh.dim(0) != 4 * hidden || wh.dim(1) != hidden)
    throw DimensionError("lstm_cell wh must be [4H, H]");
  if (b.ndim() != 1 || b.dim(0) != 4 * hidden) throw DimensionError("lstm_cell bias must be [4H]");

  Eigen::VectorXd pre(4 * hidden);
  ConstMapMat wxm(wx.data(), 4 * hidden, in);
  ConstMapMat whm(wh.data(), 4 * hidden, hidden);
  ConstMapVec xv(x.data(), in), hv(h_prev.data(), hidden), bv(b.data(), 4 * hidden);
  pre.noalias() = wxm * xv + whm * hv + bv;

  saved->i = Tensor({hidden});
  saved->f = Tensor({hidden});
  saved->g = Tensor({hidden});
  saved->o = Tensor({hidden});
  saved->c_new = Tensor({hidden});
  saved->tanh_c = Tensor({hidden});
  *h_out = Tensor({hidden});
  *c_out = Tensor({hidden});
  for (int j = 0; j < hidden; ++j) {
    const double ig = 1.0 / (1.0 + std::exp(-pre[j]));
    const double fg = 1.0 / (1.0 + std::exp(-pre[hidden + j]));
    const double gg = std::tanh(pre[2 * hidden + j]);
    const double og = 1.0 / (1.0 + std::exp(-pre[3 * hidden + j]));
    const double c_new = fg * c_prev[static_cast<std::size_t>(j)] + ig * gg;
    const double tc = std::tanh(c_new);
    saved->i[static_cast<std::size_t>(j)] = ig;
    saved->f[static_cast<std::size_t>(j)] = fg;
    saved->g[static_cast<std::size_t>(j)] = gg;
    saved->o[static_cast<std::size_t>(j)] = og;
    saved->c_new[static_cast<std::size_t>(j)] = c_new;
    saved->tanh_c[static_cast<std::size_t>(j)] = tc;
    (*c_out)[static_cast<std::size_t>(j)] = c_new;
    (*h_out)[static_cast<std::size_t>(j)] = og * tc;
  }
}

void lstm_cell_backward(const Tensor& x, const Tensor& h_prev, const Tensor& c_prev,
                        const Tensor& wx, const Tensor& wh, const LstmSaved& saved,
                        const Tensor& gh, const Tensor& gc, Tensor* gx, Tensor* gh_prev,
                        Tensor* gc_prev, Tensor* gwx, Tensor* gwh, Tensor* gb) {
  const int in = x.dim(0);
  const int hidden = h_prev.dim(0);
  Eigen::VectorXd gpre(4 * hidden);
  Eigen::VectorXd gc_prev_acc(hidden);

  for (int j = 0; j < hidden; ++j) {
    const auto js = static_cast<std::size_t>(j);
    const double ghj = gh.empty() ? 0.0 : gh[js];
    double gcj = gc.empty() ? 0.0 : gc[js];
    const double i = saved.i[js], f = saved.f[js], g = saved.g[js], o = saved.o[js];
    const double tc = saved.tanh_c[js];
    const double go = ghj * tc;
    gcj += ghj * o * (1.0 - tc * tc);
    const double gi = gcj * g;
    const double gf = gcj * c_prev[js];
    const double gg = gcj * i;
    gc_prev_acc[j] = gcj * f;
    gpre[j] = gi * i * (1.0 - i);
    gpre[hidden + j] = gf * f * (1.0 - f);
    gpre[2 * hidden + j] = gg * (1.0 - g * g);
    gpre[3 * hidden + j] = go * o * (1.0 - o);
  }

  ConstMapMat wxm(wx.data(), 4 * hidden, in);
  ConstMapMat whm(wh.data(), 4 * hidden, hidden);
  ConstMapVec xv(x.data(), in), hv(h_prev.data(), hidden);
  if (gx) {
    MapVec gxv(gx->data(), in);
    gxv.noalias() += wxm.transpose() * gpre;
  }
  if (gh_prev) {
    MapVec ghv(gh_prev->data(), hidden);
    ghv.noalias() += whm.transpose() * gpre;
  }
  if (gc_prev) {
    MapVec gcv(gc_prev->data(), hidden);
    gcv.noalias() += gc_prev_acc;
  }
  if (gwx) {
    MapMat gwxm(gwx->data(), 4 * hidden, in);
    gwxm.noalias() += gpre * xv.transpose();
  }
  if (gwh) {
    MapMat gwhm(gwh->data(), 4 * hidden, hidden);
    gwhm.noalias() += gpre * hv.transpose();
  }
  if (gb) {
    MapVec gbv(gb->data(), 4 * hidden);
    gbv.noalias() += gpre;
  }
}

Tensor softmax(const Tensor& logits) {
  const auto [n, c] = rows_cols(logits);
  Tensor y(logits.shape());
  for (int r = 0; r < n; ++r) {
    const double* src = logits.data() + static_cast<std::size_t>(r) * c;
    double* dst = y.data() + static_cast<std::size_t>(r) * c;
    double mx = src[0];
    for (int j = 1; j < c; ++j) mx = std::max(mx, src[j]);
    double z = 0.0;
    for (int j = 0; j < c; ++j) {
      dst[j] = std::exp(src[j] - mx);
      z += dst[j];
    }
    for (int j = 0; j < c; ++j) dst[j] /= z;
  }
  return y;
}

Tensor matmul_tn(const Tensor& a, const Tensor& b) {
  if (a.ndim() != 2 || b.ndim() != 2 || a.dim(0) != b.dim(0))
    throw DimensionError("matmul_tn expects [N,D1] and [N,D2]");
  Tensor y({a.dim(1), b.dim(1)});
  ConstMapMat am(a.data(), a.dim(0), a.dim(1));
  ConstMapMat bm(b.data(), b.dim(0), b.dim(1));
  MapMat ym(y.data(), a.dim(1), b.dim(1));
  ym.noalias() = am.transpose() * bm;
  return y;
}

}  // namespace rgop::ad::kernels
