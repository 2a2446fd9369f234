#include "rgop/model/config.hpp"

#include "rgop/errors.hpp"

namespace rgop::model {

std::string to_string(InputMode mode) {
  return mode == InputMode::kResidualPlusMotion ? "residual_plus_motion" : "residual_only";
}

InputMode input_mode_from_string(const std::string& s) {
  if (s == "residual_only") return InputMode::kResidualOnly;
  if (s == "residual_plus_motion") return InputMode::kResidualPlusMotion;
  throw ConfigError("unknown input mode: " + s);
}

namespace {

// Spatial size after the conv stack; throws if any stage underflows.
void check_conv_ladder(const std::vector<ConvSpec>& plan, int h, int w, const char* what) {
  if (plan.empty()) throw ConfigError(std::string(what) + ": empty conv plan");
  for (const auto& spec : plan) {
    if (spec.out_channels < 1 || spec.kernel < 1 || spec.stride < 1)
      throw ConfigError(std::string(what) + ": bad conv spec");
    if (h < spec.kernel || w < spec.kernel)
      throw ConfigError(std::string(what) + ": feature map smaller than kernel");
    h = (h - spec.kernel) / spec.stride + 1;
    w = (w - spec.kernel) / spec.stride + 1;
  }
}

int half_after_conv(int size, int kernel, const char* what) {
  const int pre = size + kernel - 1;
  if (pre % 2 != 0) throw ConfigError(std::string(what) + ": frame size incompatible with decoder ladder");
  return pre / 2;
}

}  // namespace

void ModelConfig::validate() const {
  if (class_count < 2) throw ConfigError("class_count must be >= 2");
  if (frame_height < 8 || frame_width < 8) throw ConfigError("frame too small");
  if (embed_dim < 1 || z_e_dim < 1 || z_i_dim < 1) throw ConfigError("feature dims must be positive");
  if (decoder_base_ch < 1) throw ConfigError("decoder_base_ch must be positive");
  if (motion_scale < 1) throw ConfigError("motion_scale must be >= 1");
  check_conv_ladder(fer_conv, frame_height, frame_width, "fer_conv");
  check_conv_ladder(id_conv, frame_height, frame_width, "id_conv");
  // decoder: fc map -> (up2x, conv3) -> (up2x, conv3) -> (up2x, conv5)
  int bh = half_after_conv(frame_height, 5, "decoder");
  bh = half_after_conv(bh, 3, "decoder");
  bh = half_after_conv(bh, 3, "decoder");
  int bw = half_after_conv(frame_width, 5, "decoder");
  bw = half_after_conv(bw, 3, "decoder");
  bw = half_after_conv(bw, 3, "decoder");
  if (bh < 1 || bw < 1) throw ConfigError("decoder base map degenerate");
}

namespace {

std::vector<ConvSpec> conv_plan_from_json(const nlohmann::json& j) {
  std::vector<ConvSpec> plan;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != 3) throw ConfigError("conv spec must be [channels, kernel, stride]");
    plan.push_back({row[0].get<int>(), row[1].get<int>(), row[2].get<int>()});
  }
  return plan;
}

nlohmann::json conv_plan_to_json(const std::vector<ConvSpec>& plan) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& s : plan) j.push_back({s.out_channels, s.kernel, s.stride});
  return j;
}

}  // namespace

ModelConfig model_config_from_json(const nlohmann::json& j) {
  ModelConfig cfg;
  if (j.contains("input_mode")) cfg.input_mode = input_mode_from_string(j.at("input_mode").get<std::string>());
  if (j.contains("frame_height")) cfg.frame_height = j.at("frame_height").get<int>();
  if (j.contains("frame_width")) cfg.frame_width = j.at("frame_width").get<int>();
  if (j.contains("class_count")) cfg.class_count = j.at("class_count").get<int>();
  if (j.contains("fer_conv")) cfg.fer_conv = conv_plan_from_json(j.at("fer_conv"));
  if (j.contains("embed_dim")) cfg.embed_dim = j.at("embed_dim").get<int>();
  if (j.contains("z_e_dim")) cfg.z_e_dim = j.at("z_e_dim").get<int>();
  if (j.contains("id_conv")) cfg.id_conv = conv_plan_from_json(j.at("id_conv"));
  if (j.contains("z_i_dim")) cfg.z_i_dim = j.at("z_i_dim").get<int>();
  if (j.contains("decoder_base_ch")) cfg.decoder_base_ch = j.at("decoder_base_ch").get<int>();
  if (j.contains("motion_scale")) cfg.motion_scale = j.at("motion_scale").get<int>();
  cfg.validate();
  return cfg;
}

nlohmann::json model_config_to_json(const ModelConfig& cfg) {
  nlohmann::json j;
  j["input_mode"] = to_string(cfg.input_mode);
  j["frame_height"] = cfg.frame_height;
  j["frame_width"] = cfg.frame_width;
  j["class_count"] = cfg.class_count;
  j["fer_conv"] = conv_plan_to_json(cfg.fer_conv);
  j["embed_dim"] = cfg.embed_dim;
  j["z_e_dim"] = cfg.z_e_dim;
  j["id_conv"] = conv_plan_to_json(cfg.id_conv);
  j["z_i_dim"] = cfg.z_i_dim;
  j["decoder_base_ch"] = cfg.decoder_base_ch;
  j["motion_scale"] = cfg.motion_scale;
  return j;
}

void LossWeights::validate() const {
  if (alpha < 0.0 || alpha > 1.0) throw ConfigError("alpha must lie in [0,1]");
  if (beta < 0.0 || beta > 1.0) throw ConfigError("beta must lie in [0,1]");
}

}  // namespace rgop::model
