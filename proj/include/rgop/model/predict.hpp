#pragma once

#include <vector>

#include "rgop/ad/param_store.hpp"
#include "rgop/codec/codec.hpp"
#include "rgop/model/config.hpp"

namespace rgop::model {

/// One video sequence in compressed-domain form: the first I-frame plus all
/// (motion, residual) pairs in stream order. No reconstructed pixels.
struct CompressedSequence {
  Frame i_frame;
  std::vector<std::pair<codec::MotionField, ResidualFrame>> p_frames;

  static CompressedSequence from_bitstream(const codec::Bitstream& bs);
};

/// Test-time classification: residual embeddings -> LSTM -> classifier ->
/// argmax. Runs on the compressed representation only; never decodes
/// pixels, touches the identity branch, or the decoder. Sequences without
/// P-frames cannot be classified.
int predict(const CompressedSequence& seq, const ad::ParamStore& params,
            const ModelConfig& cfg);

/// Per-class logits for the same path (argmax of these is predict()).
ad::Tensor predict_logits(const CompressedSequence& seq, const ad::ParamStore& params,
                          const ModelConfig& cfg);

}  // namespace rgop::model
