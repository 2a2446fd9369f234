#pragma once

#include <string>
#include <vector>

#include "vendor_json_fwd.hpp"

namespace rgop::model {

enum class InputMode {
  kResidualOnly,
  kResidualPlusMotion,  // motion grid upsampled to pixels, 2 extra channels
};

std::string to_string(InputMode mode);
InputMode input_mode_from_string(const std::string& s);

struct ConvSpec {
  int out_channels = 0;
  int kernel = 0;
  int stride = 1;
};

/// Architecture of the recognition branch, the frozen identity branch and
/// the apex decoder. Feature widths default to desk scale.
struct ModelConfig {
  InputMode input_mode = InputMode::kResidualOnly;
  int frame_height = 64;
  int frame_width = 64;
  int class_count = 7;

  // recognition branch: per-frame embedder, recurrent aggregator, classifier
  std::vector<ConvSpec> fer_conv = {{12, 4, 4}, {24, 3, 2}, {48, 3, 2}};
  int embed_dim = 64;  // per-frame embedding, LSTM input
  int z_e_dim = 64;    // LSTM hidden size == expression feature size

  // identity branch (frozen after pretraining)
  std::vector<ConvSpec> id_conv = {{12, 4, 4}, {24, 3, 2}, {48, 3, 2}};
  int z_i_dim = 128;

  // apex decoder: fc to a [decoder_base_ch, bh, bw] map, then three
  // (upsample, conv) stages with kernels 3, 3, 5 back to frame size
  int decoder_base_ch = 32;

  // normalization scale for the motion channels in kResidualPlusMotion
  int motion_scale = 7;

  int input_channels() const {
    return input_mode == InputMode::kResidualPlusMotion ? 5 : 3;
  }

  void validate() const;
};

ModelConfig model_config_from_json(const nlohmann::json& j);
nlohmann::json model_config_to_json(const ModelConfig& cfg);

/// Balance weights of the auxiliary objectives; both must lie in [0, 1].
struct LossWeights {
  double alpha = 0.1;  // independence penalty
  double beta = 0.5;   // apex reconstruction

  void validate() const;
};

}  // namespace rgop::model
