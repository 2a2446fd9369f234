#pragma once

#include <map>
#include <string>

#include "rgop/ad/param_store.hpp"
#include "rgop/ad/tape.hpp"

namespace rgop::ad {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Per-parameter first/second moment state.
class AdamState {
 public:
  void ensure(const std::string& name, const Tensor& like);
  Tensor& m(const std::string& name) { return moments_.at(name).first; }
  Tensor& v(const std::string& name) { return moments_.at(name).second; }
  int step_count = 0;

 private:
  std::map<std::string, std::pair<Tensor, Tensor>> moments_;
};

/// Bias-corrected Adam update. Parameters without a gradient entry (frozen
/// or simply unused this step) stay untouched.
void adam_step(ParamStore& params, const GradMap& grads, const AdamConfig& cfg,
               AdamState& state);

}  // namespace rgop::ad
