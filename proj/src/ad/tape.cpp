#include "rgop/ad/tape.hpp"

#include <cmath>
#include <memory>

#include "rgop/ad/kernels.hpp"
#include "rgop/errors.hpp"

namespace rgop::ad {

namespace k = kernels;

Value Tape::push_value(Tensor t, bool requires_grad) {
#ifdef RGOP_CHECK_FINITE
  if (!t.all_finite()) throw Error("non-finite value produced on tape");
#endif
  values_.push_back(std::move(t));
  requires_.push_back(requires_grad ? 1 : 0);
  return Value{static_cast<int>(values_.size()) - 1};
}

void Tape::push_node(std::function<void(Tape&)> backward) {
  nodes_.push_back(std::move(backward));
}

void Tape::check(Value v) const {
  if (!v.valid() || static_cast<std::size_t>(v.id) >= values_.size())
    throw ArgumentError("invalid tape value handle");
}

const Tensor& Tape::val(Value v) const {
  check(v);
  return values_[static_cast<std::size_t>(v.id)];
}

Tensor* Tape::grad_of(int vid) {
  Tensor& g = grads_[static_cast<std::size_t>(vid)];
  return g.empty() ? nullptr : &g;
}

void Tape::accum_grad(int vid, const Tensor& g) {
  if (!needs(vid)) return;
  Tensor& slot = grads_[static_cast<std::size_t>(vid)];
  if (slot.empty()) slot = Tensor(values_[static_cast<std::size_t>(vid)].shape());
  slot.add_inplace(g);
}

namespace {

Tensor* slot_or_null(std::vector<Tensor>& grads, const std::vector<Tensor>& values,
                     const std::vector<char>& requires, int vid) {
  if (!requires[static_cast<std::size_t>(vid)]) return nullptr;
  Tensor& slot = grads[static_cast<std::size_t>(vid)];
  if (slot.empty()) slot = Tensor(values[static_cast<std::size_t>(vid)].shape());
  return &slot;
}

}  // namespace

Value Tape::input(Tensor t, bool requires_grad) { return push_value(std::move(t), requires_grad); }

Value Tape::param(const std::string& name) {
  if (!params_) throw ArgumentError("tape has no parameter store");
  auto it = param_memo_.find(name);
  if (it != param_memo_.end()) return it->second;
  const bool trainable = params_->trainable(name);
  const Value v = push_value(params_->at(name), trainable);
  param_memo_[name] = v;
  param_leaves_[v.id] = ParamLeaf{name, trainable};
  return v;
}

Value Tape::conv2d(Value x, Value w, Value b, int stride) {
  check(x);
  check(w);
  check(b);
  Value y = push_value(k::conv2d_forward(val(x), val(w), val(b), stride),
                       needs(x) || needs(w) || needs(b));
  push_node([x, w, b, y, stride](Tape& t) {
    Tensor* gy = t.grad_of(y.id);
    if (!gy) return;
    Tensor* gx = slot_or_null(t.grads_, t.values_, t.requires_, x.id);
    Tensor* gw = slot_or_null(t.grads_, t.values_, t.requires_, w.id);
    Tensor* gb = slot_or_null(t.grads_, t.values_, t.requires_, b.id);
    if (!gx && !gw && !gb) return;
    k::conv2d_backward(t.val(x), t.val(w), stride, *gy, gx, gw, gb);
  });
  return y;
}

Value Tape::linear(Value x, Value w, Value b) {
  check(x);
  check(w);
  check(b);
  Value y = push_value(k::linear_forward(val(x), val(w), val(b)),
                       needs(x) || needs(w) || needs(b));
  push_node([x, w, b, y](Tape& t) {
    Tensor* gy = t.grad_of(y.id);
    if (!gy) return;
    Tensor* gx = slot_or_null(t.grads_, t.values_, t.requires_, x.id);
    Tensor* gw = slot_or_null(t.grads_, t.values_, t.requires_, w.id);
    Tensor* gb = slot_or_null(t.grads_, t.values_, t.requires_, b.id);
    if (!gx && !gw && !gb) return;
    k::linear_backward(t.val(x), t.val(w), *gy, gx, gw, gb);
  });
  return y;
}

Value Tape::relu(Value x) {
  check(x);
  Value y = push_value(k::relu_forward(val(x)), needs(x));
  push_node([x, y](Tape& t) {
    Tensor* gy = t.grad_of(y.id);
    if (!gy || !t.needs(x)) return;
    const Tensor& xv = t.val(x);
    Tensor g(xv.shape());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = xv[i] > 0.0 ? (*gy)[i] : 0.0;
    t.accum_grad(x.id, g);
  });
  return y;
}

Value Tape::sigmoid(Value x) {
  check(x);
  Value y = push_value(k::sigmoid_forward(val(x)), needs(x));
  push_node([x, y](Tape& t) {
    Tensor* gy = t.grad_of(y.id);
    if (!gy || !t.needs(x)) return;
    const Tensor& yv = t.val(y);
    Tensor g(yv.shape());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = (*gy)[i] * yv[i] * (1.0 - yv[i]);
    t.accum_grad(x.id, g);
  });
  return y;
}

std::pair<Value, Value> Tape::lstm_cell(Value x, Value h_prev, Value c_prev, Value wx,
                                        Value wh, Value b) {
  check(x);
  check(h_prev);
  check(c_prev);
  check(wx);
  check(wh);
  check(b);
  Tensor h_out, c_out;
  auto saved = std::make_shared<k::LstmSaved>();
  k::lstm_cell_forward(val(x), val(h_prev), val(c_prev), val(wx), val(wh), val(b), &h_out,
                       &c_out, saved.get());
  const bool req = needs(x) || needs(h_prev) || needs(c_prev) || needs(wx) || needs(wh) || needs(b);
  Value h = push_value(std::move(h_out), req);
  Value c = push_value(std::move(c_out), req);
  push_node([x, h_prev, c_prev, wx, wh, b, h, c, saved](Tape& t) {
    Tensor* gh = t.grad_of(h.id);
    Tensor* gc = t.grad_of(c.id);
    if (!gh && !gc) return;
    static const Tensor kEmpty;
    Tensor* gx = slot_or_null(t.grads_, t.values_, t.requires_, x.id);
    Tensor* ghp = slot_or_null(t.grads_, t.values_, t.requires_, h_prev.id);
    Tensor* gcp = slot_or_null(t.grads_, t.values_, t.requires_, c_prev.id);
    Tensor* gwx = slot_or_null(t.grads_, t.values_, t.requires_, wx.id);
    Tensor* gwh = slot_or_null(t.grads_, t.values_, t.requires_, wh.id);
    Tensor* gb = slot_or_null(t.grads_, t.values_, t.requires_, b.id);
    if (!gx && !ghp && !gcp && !gwx && !gwh && !gb) return;
    k::lstm_cell_backward(t.val(x), t.val(h_prev), t.val(c_prev), t.val(wx), t.val(wh),
                          *saved, gh ? *gh : kEmpty, gc ? *gc : kEmpty, gx, ghp, gcp, gwx,
                          gwh, gb);
  });
  return {h, c};
}

Value Tape::mean_pool_hw(Value x) {
  check(x);
  Value y = push_value(k::mean_pool_hw_forward(val(x)), needs(x));
  push_node([x, y](Tape& t) {
    Tensor* gy = t.grad_of(y.id);
    if (!gy || !t.needs(x)) return;
    const Tensor& xv = t.val(x);
    const std::size_t hw = static_cast<std::size_t>(xv.dim(2)) * xv.dim(3);
    const double inv = 1.0 / static_cast<double>(hw);
    Tensor g(xv.shape());
    for (std::size_t i = 0; i < gy->size(); ++i) {
      const double v = (*gy)[i] * inv;
      double* dst = g.data() + i * hw;
      for (std::size_t j = 0; j < hw; ++j) dst[j] = v;
    }
    t.accum_grad(x.id, g);
  });
  return y;
}

Value Tape::upsample2x(Value x) {
  check(x);
  Value y = push_value(k::upsample2x_forward(val(x)), needs(x));
  push_node([x, y](Tape& t) {
    Tensor* gy = t.grad_of(y.id);
    if (!gy || !t.needs(x)) return;
    const Tensor& xv = t.val(x);
    const int n = xv.dim(0), c = xv.dim(1), h = xv.dim(2), w = xv.dim(3);
    Tensor g(xv.shape());
    for (int nc = 0; nc < n * c; ++nc) {
      const double* src = gy->data() + static_cast<std::size_t>(nc) * 4 * h * w;
      double* dst = g.data() + static_cast<std::size_t>(nc) * h * w;
      for (int yy = 0; yy < h; ++yy)
        for (int xx = 0; xx < w; ++xx) {
          const double* s0 = src + (2 * yy) * (2 * w) + 2 * xx;
          dst[yy * w + xx] = s0[0] + s0[1] + s0[2 * w] + s0[2 * w + 1];
        }
    }
    t.accum_grad(x.id, g);
  });
  return y;
}

Value Tape::reshape(Value x, std::vector<int> shape) {
  check(x);
  if (shape_size(shape) != val(x).size()) throw DimensionError("reshape size mismatch");
  Tensor y(shape, std::vector<double>(val(x).data(), val(x).data() + val(x).size()));
  Value yv = push_value(std::move(y), needs(x));
  push_node([x, yv](Tape& t) {
    Tensor* gy = t.grad_of(yv.id);
    if (!gy || !t.needs(x)) return;
    Tensor g(t.val(x).shape(), std::vector<double>(gy->data(), gy->data() + gy->size()));
    t.accum_grad(x.id, g);
  });
  return yv;
}

Value Tape::concat(Value a, Value b, int axis) {
  check(a);
  check(b);
  const Tensor& av = val(a);
  const Tensor& bv = val(b);
  if (av.ndim() != bv.ndim()) throw DimensionError("concat rank mismatch");
  if (axis < 0 || axis >= av.ndim()) throw ArgumentError("concat axis out of range");
  for (int i = 0; i < av.ndim(); ++i)
    if (i != axis && av.dim(i) != bv.dim(i)) throw DimensionError("concat shape mismatch");

  std::vector<int> shape = av.shape();
  shape[static_cast<std::size_t>(axis)] += bv.dim(axis);

  std::size_t outer = 1, inner = 1;
  for (int i = 0; i < axis; ++i) outer *= static_cast<std::size_t>(av.dim(i));
  for (int i = axis + 1; i < av.ndim(); ++i) inner *= static_cast<std::size_t>(av.dim(i));
  const std::size_t a_chunk = static_cast<std::size_t>(av.dim(axis)) * inner;
  const std::size_t b_chunk = static_cast<std::size_t>(bv.dim(axis)) * inner;

  Tensor y(shape);
  for (std::size_t r = 0; r < outer; ++r) {
    std::copy(av.data() + r * a_chunk, av.data() + (r + 1) * a_chunk,
              y.data() + r * (a_chunk + b_chunk));
    std::copy(bv.data() + r * b_chunk, bv.data() + (r + 1) * b_chunk,
              y.data() + r * (a_chunk + b_chunk) + a_chunk);
  }
  Value yv = push_value(std::move(y), needs(a) || needs(b));
  push_node([a, b, yv, outer, a_chunk, b_chunk](Tape& t) {
    Tensor* gy = t.grad_of(yv.id);
    if (!gy) return;
    if (t.needs(a)) {
      Tensor ga(t.val(a).shape());
      for (std::size_t r = 0; r < outer; ++r) {
        const double* src = gy->data() + r * (a_chunk + b_chunk);
        std::copy(src, src + a_chunk, ga.data() + r * a_chunk);
      }
      t.accum_grad(a.id, ga);
    }
    if (t.needs(b)) {
      Tensor gb(t.val(b).shape());
      for (std::size_t r = 0; r < outer; ++r) {
        const double* src = gy->data() + r * (a_chunk + b_chunk) + a_chunk;
        std::copy(src, src + b_chunk, gb.data() + r * b_chunk);
      }
      t.accum_grad(b.id, gb);
    }
  });
  return yv;
}

Value Tape::stack_rows(const std::vector<Value>& rows) {
  if (rows.empty()) throw ArgumentError("stack_rows: empty input");
  const int d = val(rows[0]).dim(0);
  bool req = false;
  for (const Value& r : rows) {
    check(r);
    if (val(r).ndim() != 1 || val(r).dim(0) != d)
      throw DimensionError("stack_rows: rows must be equal-length vectors");
    req = req || needs(r);
  }
  Tensor y({static_cast<int>(rows.size()), d});
  for (std::size_t i = 0; i < rows.size(); ++i)
    std::copy(val(rows[i]).data(), val(rows[i]).data() + d,
              y.data() + i * static_cast<std::size_t>(d));
  Value yv = push_value(std::move(y), req);
  auto rows_copy = rows;
  push_node([rows_copy, yv, d](Tape& t) {
    Tensor* gy = t.grad_of(yv.id);
    if (!gy) return;
    for (std::size_t i = 0; i < rows_copy.size(); ++i) {
      if (!t.needs(rows_copy[i])) continue;
      Tensor g({d}, std::vector<double>(gy->data() + i * static_cast<std::size_t>(d),
                                        gy->data() + (i + 1) * static_cast<std::size_t>(d)));
      t.accum_grad(rows_copy[i].id, g);
    }
  });
  return yv;
}

Value Tape::slice_rows(Value x, int begin, int count) {
  check(x);
  const Tensor& xv = val(x);
  if (xv.ndim() < 1) throw DimensionError("slice_rows needs rank >= 1");
  if (begin < 0 || count <= 0 || begin + count > xv.dim(0))
    throw ArgumentError("slice_rows range out of bounds");
  std::size_t inner = 1;
  for (int i = 1; i < xv.ndim(); ++i) inner *= static_cast<std::size_t>(xv.dim(i));
  std::vector<int> shape = xv.shape();
  shape[0] = count;
  Tensor y(shape, std::vector<double>(xv.data() + begin * inner,
                                      xv.data() + (begin + count) * inner));
  Value yv = push_value(std::move(y), needs(x));
  push_node([x, yv, begin, inner](Tape& t) {
    Tensor* gy = t.grad_of(yv.id);
    if (!gy) return;
    Tensor* gx = slot_or_null(t.grads_, t.values_, t.requires_, x.id);
    if (!gx) return;
    double* dst = gx->data() + static_cast<std::size_t>(begin) * inner;
    for (std::size_t i = 0; i < gy->size(); ++i) dst[i] += (*gy)[i];
  });
  return yv;
}

Value Tape::row(Value x, int index) {
  check(x);
  const Tensor& xv = val(x);
  if (xv.ndim() != 2) throw DimensionError("row expects a matrix");
  if (index < 0 || index >= xv.dim(0)) throw ArgumentError("row index out of range");
  const int d = xv.dim(1);
  Tensor y({d}, std::vector<double>(xv.data() + static_cast<std::size_t>(index) * d,
                                    xv.data() + static_cast<std::size_t>(index + 1) * d));
  Value yv = push_value(std::move(y), needs(x));
  push_node([x, yv, index, d](Tape& t) {
    Tensor* gy = t.grad_of(yv.id);
    if (!gy) return;
    Tensor* gx = slot_or_null(t.grads_, t.values_, t.requires_, x.id);
    if (!gx) return;
    double* dst = gx->data() + static_cast<std::size_t>(index) * d;
    for (int i = 0; i < d; ++i) dst[static_cast<std::size_t>(i)] += (*gy)[static_cast<std::size_t>(i)];
  });
  return yv;
}

Value Tape::add(Value a, Value b) {
  check(a);
  check(b);
  if (!val(a).same_shape(val(b))) throw DimensionError("add shape mismatch");
  Tensor y(val(a).shape());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = val(a)[i] + val(b)[i];
  Value yv = push_value(std::move(y), needs(a) || needs(b));
  push_node([a, b, yv](Tape& t) {
    Tensor* gy = t.grad_of(yv.id);
    if (!gy) return;
    t.accum_grad(a.id, *gy);
    t.accum_grad(b.id, *gy);
  });
  return yv;
}

Value Tape::scale(Value x, double s) {
  check(x);
  Tensor y(val(x).shape());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = val(x)[i] * s;
  Value yv = push_value(std::move(y), needs(x));
  push_node([x, yv, s](Tape& t) {
    Tensor* gy = t.grad_of(yv.id);
    if (!gy || !t.needs(x)) return;
    Tensor g(gy->shape());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = (*gy)[i] * s;
    t.accum_grad(x.id, g);
  });
  return yv;
}

Value Tape::softmax_ce(Value logits, const std::vector<int>& labels) {
  check(logits);
  const Tensor& lv = val(logits);
  const int n = lv.ndim() == 1 ? 1 : lv.dim(0);
  const int c = lv.ndim() == 1 ? lv.dim(0) : lv.dim(1);
  if (static_cast<int>(labels.size()) != n)
    throw DimensionError("softmax_ce: one label per row required");
  for (int y : labels)
    if (y < 0 || y >= c) throw ArgumentError("softmax_ce: label out of range");

  auto probs = std::make_shared<Tensor>(k::softmax(lv));
  double loss = 0.0;
  for (int r = 0; r < n; ++r)
    loss -= std::log(
        std::max((*probs)[static_cast<std::size_t>(r) * c + labels[static_cast<std::size_t>(r)]],
                 1e-300));
  loss /= n;
  Value out = push_value(Tensor::scalar(loss), needs(logits));
  auto labels_copy = labels;
  push_node([logits, out, probs, labels_copy, n, c](Tape& t) {
    Tensor* gy = t.grad_of(out.id);
    if (!gy || !t.needs(logits)) return;
    const double gs = (*gy)[0] / n;
    Tensor g(t.val(logits).shape());
    for (int r = 0; r < n; ++r)
      for (int j = 0; j < c; ++j) {
        const std::size_t idx = static_cast<std::size_t>(r) * c + j;
        g[idx] =
            gs * ((*probs)[idx] - (j == labels_copy[static_cast<std::size_t>(r)] ? 1.0 : 0.0));
      }
    t.accum_grad(logits.id, g);
  });
  return out;
}

Value Tape::l2_loss(Value a, Value b) {
  check(a);
  check(b);
  if (!val(a).same_shape(val(b))) throw DimensionError("l2_loss shape mismatch");
  const Tensor& av = val(a);
  const Tensor& bv = val(b);
  double acc = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) {
    const double d = av[i] - bv[i];
    acc += d * d;
  }
  const double inv = 1.0 / static_cast<double>(av.size());
  Value out = push_value(Tensor::scalar(acc * inv), needs(a) || needs(b));
  push_node([a, b, out, inv](Tape& t) {
    Tensor* gy = t.grad_of(out.id);
    if (!gy) return;
    const double gs = (*gy)[0] * 2.0 * inv;
    const Tensor& av2 = t.val(a);
    const Tensor& bv2 = t.val(b);
    if (t.needs(a)) {
      Tensor ga(av2.shape());
      for (std::size_t i = 0; i < av2.size(); ++i) ga[i] = gs * (av2[i] - bv2[i]);
      t.accum_grad(a.id, ga);
    }
    if (t.needs(b)) {
      Tensor gb(bv2.shape());
      for (std::size_t i = 0; i < bv2.size(); ++i) gb[i] = -gs * (av2[i] - bv2[i]);
      t.accum_grad(b.id, gb);
    }
  });
  return out;
}

Value Tape::standardize_columns(Value x, double eps) {
  check(x);
  const Tensor& xv = val(x);
  if (xv.ndim() != 2) throw DimensionError("standardize_columns expects [N,D]");
  const int n = xv.dim(0);
  const int d = xv.dim(1);
  if (n < 2) throw ArgumentError("standardize_columns needs at least 2 rows");

  auto sigma = std::make_shared<std::vector<double>>(static_cast<std::size_t>(d));
  Tensor y({n, d});
  for (int j = 0; j < d; ++j) {
    double mean = 0.0;
    for (int r = 0; r < n; ++r) mean += xv[static_cast<std::size_t>(r) * d + j];
    mean /= n;
    double var = 0.0;
    for (int r = 0; r < n; ++r) {
      const double c = xv[static_cast<std::size_t>(r) * d + j] - mean;
      var += c * c;
    }
    var /= n;
    const double s = std::sqrt(var + eps);
    (*sigma)[static_cast<std::size_t>(j)] = s;
    for (int r = 0; r < n; ++r)
      y[static_cast<std::size_t>(r) * d + j] =
          (xv[static_cast<std::size_t>(r) * d + j] - mean) / s;
  }
  Value yv = push_value(std::move(y), needs(x));
  push_node([x, yv, sigma, n, d](Tape& t) {
    Tensor* gy = t.grad_of(yv.id);
    if (!gy || !t.needs(x)) return;
    const Tensor& yh = t.val(yv);
    Tensor g(t.val(x).shape());
    // column-wise batch-norm backward: dx = (g - mean(g) - yh*mean(g*yh)) / s
    for (int j = 0; j < d; ++j) {
      double gmean = 0.0, gymean = 0.0;
      for (int r = 0; r < n; ++r) {
        const std::size_t idx = static_cast<std::size_t>(r) * d + j;
        gmean += (*gy)[idx];
        gymean += (*gy)[idx] * yh[idx];
      }
      gmean /= n;
      gymean /= n;
      const double inv_s = 1.0 / (*sigma)[static_cast<std::size_t>(j)];
      for (int r = 0; r < n; ++r) {
        const std::size_t idx = static_cast<std::size_t>(r) * d + j;
        g[idx] = inv_s * ((*gy)[idx] - gmean - yh[idx] * gymean);
      }
    }
    t.accum_grad(x.id, g);
  });
  return yv;
}

Value Tape::matmul_tn(Value a, Value b) {
  check(a);
  check(b);
  Value y = push_value(k::matmul_tn(val(a), val(b)), needs(a) || needs(b));
  push_node([a, b, y](Tape& t) {
    Tensor* gy = t.grad_of(y.id);
    if (!gy) return;
    const Tensor& av = t.val(a);
    const Tensor& bv = t.val(b);
    const int n = av.dim(0), d1 = av.dim(1), d2 = bv.dim(1);
    // y = a^T b ; ga = b gy^T, gb = a gy
    if (t.needs(a)) {
      Tensor ga(av.shape());
      for (int r = 0; r < n; ++r)
        for (int i = 0; i < d1; ++i) {
          double acc = 0.0;
          for (int j = 0; j < d2; ++j)
            acc += bv[static_cast<std::size_t>(r) * d2 + j] *
                   (*gy)[static_cast<std::size_t>(i) * d2 + j];
          ga[static_cast<std::size_t>(r) * d1 + i] = acc;
        }
      t.accum_grad(a.id, ga);
    }
    if (t.needs(b)) {
      Tensor gb(bv.shape());
      for (int r = 0; r < n; ++r)
        for (int j = 0; j < d2; ++j) {
          double acc = 0.0;
          for (int i = 0; i < d1; ++i)
            acc += av[static_cast<std::size_t>(r) * d1 + i] *
                   (*gy)[static_cast<std::size_t>(i) * d2 + j];
          gb[static_cast<std::size_t>(r) * d2 + j] = acc;
        }
      t.accum_grad(b.id, gb);
    }
  });
  return y;
}

Value Tape::square_sum(Value x) {
  check(x);
  const Tensor& xv = val(x);
  double acc = 0.0;
  for (std::size_t i = 0; i < xv.size(); ++i) acc += xv[i] * xv[i];
  Value out = push_value(Tensor::scalar(acc), needs(x));
  push_node([x, out](Tape& t) {
    Tensor* gy = t.grad_of(out.id);
    if (!gy || !t.needs(x)) return;
    const double gs = (*gy)[0] * 2.0;
    const Tensor& xv2 = t.val(x);
    Tensor g(xv2.shape());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = gs * xv2[i];
    t.accum_grad(x.id, g);
  });
  return out;
}

Value Tape::weighted_sum(const std::vector<std::pair<double, Value>>& terms) {
  if (terms.empty()) throw ArgumentError("weighted_sum: no terms");
  double acc = 0.0;
  bool req = false;
  for (const auto& [c, v] : terms) {
    check(v);
    acc += c * val(v).item();
    req = req || needs(v);
  }
  Value out = push_value(Tensor::scalar(acc), req);
  auto terms_copy = terms;
  push_node([terms_copy, out](Tape& t) {
    Tensor* gy = t.grad_of(out.id);
    if (!gy) return;
    for (const auto& [c, v] : terms_copy) t.accum_grad(v.id, Tensor::scalar((*gy)[0] * c));
  });
  return out;
}

GradMap Tape::backward(Value loss) {
  check(loss);
  if (val(loss).size() != 1) throw ArgumentError("backward requires a scalar loss");
  grads_.assign(values_.size(), Tensor());
  grads_[static_cast<std::size_t>(loss.id)] = Tensor(val(loss).shape(), 1.0);
  for (std::size_t i = nodes_.size(); i-- > 0;) nodes_[i](*this);

  GradMap out;
  for (const auto& [vid, leaf] : param_leaves_) {
    if (!leaf.trainable) continue;
    Tensor* g = grad_of(vid);
    if (g) out[leaf.name] = *g;
  }
  return out;
}

const Tensor* Tape::grad(Value v) const {
  if (!v.valid() || static_cast<std::size_t>(v.id) >= grads_.size()) return nullptr;
  const Tensor& g = grads_[static_cast<std::size_t>(v.id)];
  return g.empty() ? nullptr : &g;
}

}  // namespace rgop::ad
