#pragma once

#include <cstdint>
#include <string>

#include "rgop/ad/optim.hpp"
#include "rgop/model/config.hpp"

namespace rgop {

enum class AblationTag {
  kBase,
  kNoApex,      // drop the apex reconstruction constraint (beta = 0)
  kPlusMotion,  // concatenate the motion field with the residual input
};

std::string to_string(AblationTag tag);
AblationTag ablation_tag_from_string(const std::string& s);

/// Everything a training/evaluation run needs, JSON-serializable. CLI flags
/// override file values; the resolved config is echoed before every run.
struct RunConfig {
  model::ModelConfig model;
  model::LossWeights weights;  // alpha, beta
  int warm_epochs = 5;         // beta applies to epochs < warm_epochs only
  int epochs = 30;
  int batch_size = 8;
  ad::AdamConfig adam;
  int k_folds = 10;
  std::uint64_t seed = 1;
  int workers = 0;  // fold-level parallelism; 0 = hardware concurrency
  AblationTag tag = AblationTag::kBase;

  // identity-branch pretraining
  int id_epochs = 40;
  int id_batch = 16;
  double id_lr = 1e-3;

  /// Enforces the ablation tag's constraints on the rest of the config.
  void apply_tag();
  void validate() const;

  static RunConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

}  // namespace rgop
