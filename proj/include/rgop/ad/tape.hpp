#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rgop/ad/param_store.hpp"
#include "rgop/ad/tensor.hpp"

namespace rgop::ad {

/// Handle to a tensor recorded on a Tape.
struct Value {
  int id = -1;
  bool valid() const { return id >= 0; }
};

using GradMap = std::map<std::string, Tensor>;

/// Reverse-mode tape. Operations record the forward result plus a closure
/// that pushes gradients to their inputs; backward() runs the closures in
/// reverse creation order (a topological order by construction) and visits
/// each node exactly once. Gradients accumulate additively across fan-out.
class Tape {
 public:
  explicit Tape(const ParamStore* params = nullptr) : params_(params) {}

  // ---- leaves ----
  /// Constant leaf. Pass requires_grad = true to have backward() compute a
  /// gradient for it (finite-difference oracles probe inputs this way);
  /// plain data inputs skip that work.
  Value input(Tensor t, bool requires_grad = false);
  /// Leaf bound to a named ParamStore entry; repeated calls with the same
  /// name return the same Value, so shared weights accumulate gradients.
  /// Frozen entries behave like constants.
  Value param(const std::string& name);

  // ---- ops ----
  Value conv2d(Value x, Value w, Value b, int stride);
  Value linear(Value x, Value w, Value b);
  Value relu(Value x);
  Value sigmoid(Value x);
  std::pair<Value, Value> lstm_cell(Value x, Value h_prev, Value c_prev, Value wx, Value wh,
                                    Value b);
  Value mean_pool_hw(Value x);
  Value upsample2x(Value x);
  Value reshape(Value x, std::vector<int> shape);
  Value concat(Value a, Value b, int axis);
  Value stack_rows(const std::vector<Value>& rows);
  Value slice_rows(Value x, int begin, int count);
  Value row(Value x, int index);
  Value add(Value a, Value b);
  Value scale(Value x, double s);

  // ---- reductions / losses ----
  Value softmax_ce(Value logits, const std::vector<int>& labels);
  Value l2_loss(Value a, Value b);
  /// Column-wise zero mean, unit variance (population, eps guard inside the
  /// square root). Zero-variance columns map to zero.
  Value standardize_columns(Value x, double eps = 1e-5);
  Value matmul_tn(Value a, Value b);
  Value square_sum(Value x);
  /// Scalar linear combination sum_i coeff_i * term_i (terms are scalars).
  Value weighted_sum(const std::vector<std::pair<double, Value>>& terms);

  // ---- results ----
  const Tensor& val(Value v) const;
  /// Reverse sweep from a scalar loss. Returns gradients for trainable
  /// parameters; frozen entries are omitted.
  GradMap backward(Value loss);
  /// Gradient of any recorded value after backward(); nullptr if none flowed.
  const Tensor* grad(Value v) const;

  std::size_t node_count() const { return nodes_.size(); }

 private:
  friend struct TapeOps;
  struct ParamLeaf {
    std::string name;
    bool trainable = true;
  };

  Value push_value(Tensor t, bool requires_grad);
  void push_node(std::function<void(Tape&)> backward);
  void accum_grad(int vid, const Tensor& g);
  Tensor* grad_of(int vid);
  bool needs(int vid) const { return requires_[static_cast<std::size_t>(vid)] != 0; }
  bool needs(Value v) const { return needs(v.id); }
  void check(Value v) const;

  const ParamStore* params_ = nullptr;
  std::vector<Tensor> values_;
  std::vector<char> requires_;
  std::vector<std::function<void(Tape&)>> nodes_;
  std::vector<Tensor> grads_;
  std::map<std::string, Value> param_memo_;
  std::map<int, ParamLeaf> param_leaves_;
};

}  // namespace rgop::ad
