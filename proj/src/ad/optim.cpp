#include "rgop/ad/optim.hpp"

#include <cmath>

#include "rgop/errors.hpp"

namespace rgop::ad {

void AdamState::ensure(const std::string& name, const Tensor& like) {
  if (moments_.count(name)) return;
  moments_[name] = {Tensor(like.shape()), Tensor(like.shape())};
}

void adam_step(ParamStore& params, const GradMap& grads, const AdamConfig& cfg,
               AdamState& state) {
  if (cfg.lr <= 0.0) throw ConfigError("adam learning rate must be positive");
  ++state.step_count;
  const double bc1 = 1.0 - std::pow(cfg.beta1, state.step_count);
  const double bc2 = 1.0 - std::pow(cfg.beta2, state.step_count);

  for (const auto& [name, grad] : grads) {
    if (!params.contains(name) || !params.trainable(name)) continue;
    Tensor& p = params.at(name);
    if (!p.same_shape(grad)) throw DimensionError("gradient shape mismatch for " + name);
    state.ensure(name, p);
    Tensor& m = state.m(name);
    Tensor& v = state.v(name);
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * grad[i];
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      p[i] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
    }
  }
}

}  // namespace rgop::ad
