#include "rgop/run_config.hpp"

#include "rgop/errors.hpp"

namespace rgop {

std::string to_string(AblationTag tag) {
  switch (tag) {
    case AblationTag::kBase: return "base";
    case AblationTag::kNoApex: return "no_apex";
    case AblationTag::kPlusMotion: return "plus_motion";
  }
  return "base";
}

AblationTag ablation_tag_from_string(const std::string& s) {
  if (s == "base") return AblationTag::kBase;
  if (s == "no_apex") return AblationTag::kNoApex;
  if (s == "plus_motion") return AblationTag::kPlusMotion;
  throw ConfigError("unknown ablation tag: " + s);
}

void RunConfig::apply_tag() {
  if (tag == AblationTag::kNoApex) weights.beta = 0.0;
  if (tag == AblationTag::kPlusMotion) model.input_mode = model::InputMode::kResidualPlusMotion;
}

void RunConfig::validate() const {
  model.validate();
  weights.validate();
  if (tag == AblationTag::kNoApex && weights.beta != 0.0)
    throw ConfigError("tag no_apex requires beta = 0");
  if (tag == AblationTag::kPlusMotion && model.input_mode != model::InputMode::kResidualPlusMotion)
    throw ConfigError("tag plus_motion requires input_mode residual_plus_motion");
  if (warm_epochs < 0) throw ConfigError("warm_epochs must be >= 0");
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (k_folds < 2) throw ConfigError("k_folds must be >= 2");
  if (adam.lr <= 0.0 || id_lr <= 0.0) throw ConfigError("learning rates must be positive");
  if (id_epochs < 1 || id_batch < 1) throw ConfigError("identity pretraining config invalid");
  if (workers < 0) throw ConfigError("workers must be >= 0");
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig cfg;
  if (j.contains("model")) cfg.model = model::model_config_from_json(j.at("model"));
  if (j.contains("train")) {
    const auto& t = j.at("train");
    if (t.contains("alpha")) cfg.weights.alpha = t.at("alpha").get<double>();
    if (t.contains("beta")) cfg.weights.beta = t.at("beta").get<double>();
    if (t.contains("warm_epochs")) cfg.warm_epochs = t.at("warm_epochs").get<int>();
    if (t.contains("epochs")) cfg.epochs = t.at("epochs").get<int>();
    if (t.contains("batch_size")) cfg.batch_size = t.at("batch_size").get<int>();
    if (t.contains("lr")) cfg.adam.lr = t.at("lr").get<double>();
    if (t.contains("adam_beta1")) cfg.adam.beta1 = t.at("adam_beta1").get<double>();
    if (t.contains("adam_beta2")) cfg.adam.beta2 = t.at("adam_beta2").get<double>();
    if (t.contains("adam_eps")) cfg.adam.eps = t.at("adam_eps").get<double>();
    if (t.contains("k_folds")) cfg.k_folds = t.at("k_folds").get<int>();
    if (t.contains("seed")) cfg.seed = t.at("seed").get<std::uint64_t>();
    if (t.contains("workers")) cfg.workers = t.at("workers").get<int>();
    if (t.contains("id_epochs")) cfg.id_epochs = t.at("id_epochs").get<int>();
    if (t.contains("id_batch")) cfg.id_batch = t.at("id_batch").get<int>();
    if (t.contains("id_lr")) cfg.id_lr = t.at("id_lr").get<double>();
  }
  if (j.contains("tag")) cfg.tag = ablation_tag_from_string(j.at("tag").get<std::string>());
  cfg.apply_tag();
  cfg.validate();
  return cfg;
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["model"] = model::model_config_to_json(model);
  j["train"] = {
      {"alpha", weights.alpha},
      {"beta", weights.beta},
      {"warm_epochs", warm_epochs},
      {"epochs", epochs},
      {"batch_size", batch_size},
      {"lr", adam.lr},
      {"adam_beta1", adam.beta1},
      {"adam_beta2", adam.beta2},
      {"adam_eps", adam.eps},
      {"k_folds", k_folds},
      {"seed", seed},
      {"workers", workers},
      {"id_epochs", id_epochs},
      {"id_batch", id_batch},
      {"id_lr", id_lr},
  };
  j["tag"] = to_string(tag);
  return j;
}

}  // namespace rgop
