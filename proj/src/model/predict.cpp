#include "rgop/model/predict.hpp"

#include "rgop/errors.hpp"
#include "rgop/model/network.hpp"

namespace rgop::model {

CompressedSequence CompressedSequence::from_bitstream(const codec::Bitstream& bs) {
  CompressedSequence seq;
  codec::CompressedReader reader(bs);
  bool first = true;
  while (auto gop = reader.next()) {
    if (first) {
      seq.i_frame = gop->i_frame;
      first = false;
    }
    for (auto& pf : gop->p_frames) seq.p_frames.push_back(std::move(pf));
  }
  if (first) throw ArgumentError("bitstream contains no GOPs");
  return seq;
}

ad::Tensor predict_logits(const CompressedSequence& seq, const ad::ParamStore& params,
                          const ModelConfig& cfg) {
  if (seq.p_frames.empty())
    throw ArgumentError("sequence has no P-frames; classification impossible");

  const int t_count = static_cast<int>(seq.p_frames.size());
  const int c = cfg.input_channels();
  ad::Tensor inputs({t_count, c, cfg.frame_height, cfg.frame_width});
  const std::size_t frame_elems =
      static_cast<std::size_t>(c) * cfg.frame_height * cfg.frame_width;
  const bool with_motion = cfg.input_mode == InputMode::kResidualPlusMotion;
  for (int t = 0; t < t_count; ++t) {
    const auto& [mv, res] = seq.p_frames[static_cast<std::size_t>(t)];
    const ad::Tensor x = make_fer_input(res, with_motion ? &mv : nullptr, cfg);
    std::copy(x.data(), x.data() + frame_elems, inputs.data() + t * frame_elems);
  }

  const ad::Tensor embeds = embed_frames(inputs, params, cfg);
  const ad::Tensor z_e = aggregate(embeds, params, cfg);
  return classify(z_e, params);
}

int predict(const CompressedSequence& seq, const ad::ParamStore& params,
            const ModelConfig& cfg) {
  const ad::Tensor logits = predict_logits(seq, params, cfg);
  int best = 0;
  for (int j = 1; j < cfg.class_count; ++j)
    if (logits[static_cast<std::size_t>(j)] > logits[static_cast<std::size_t>(best)]) best = j;
  return best;
}

}  // namespace rgop::model
