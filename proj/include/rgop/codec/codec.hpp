#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rgop/codec/bitstream.hpp"

namespace rgop::codec {

struct EncodeParams {
  int gop_length = 16;  // frames per GOP including the I-frame
  int block_size = 8;
  int search_radius = 7;
  int quantizer_step = 4;
};

/// Encodes a frame sequence. The first frame of each GOP is stored as a
/// lossless 8-bit I-frame; every later frame as motion vectors plus a
/// quantized residual. Prediction chains on the *reconstructed* previous
/// frame so encoder and decoder state match.
Bitstream encode_video(const std::vector<Frame>& frames, const EncodeParams& params);

/// Full decode: reverses entropy coding, dequantizes, and runs motion
/// compensation to reproduce pixel frames.
std::vector<Frame> decode_video(const Bitstream& bs);

/// One GOP exposed without pixel reconstruction: the raw I-frame plus
/// (motion, residual) pairs. Residuals are exactly what the decoder would
/// add during reconstruction.
struct GopView {
  Frame i_frame;
  std::vector<std::pair<MotionField, ResidualFrame>> p_frames;
};

/// Iterates GOPs of a bitstream on the compressed-domain fast path:
/// residuals are dequantized and inverse-transformed but no motion
/// compensation or pixel reconstruction happens.
class CompressedReader {
 public:
  explicit CompressedReader(const Bitstream& bs) : bs_(&bs) {}

  std::optional<GopView> next();
  void reset() { index_ = 0; }

  // range-for support
  class Iterator {
   public:
    Iterator(CompressedReader* r, std::optional<GopView> cur) : r_(r), cur_(std::move(cur)) {}
    const GopView& operator*() const { return *cur_; }
    Iterator& operator++() {
      cur_ = r_->next();
      return *this;
    }
    bool operator!=(const Iterator& other) const { return cur_.has_value() != other.cur_.has_value(); }

   private:
    CompressedReader* r_;
    std::optional<GopView> cur_;
  };
  Iterator begin() { return Iterator(this, next()); }
  Iterator end() { return Iterator(nullptr, std::nullopt); }

 private:
  const Bitstream* bs_;
  std::size_t index_ = 0;
};

/// Decodes the residual planes of one P-record (dequantize + inverse DCT,
/// rounded to the integer grid the decoder reconstructs on).
ResidualFrame decode_residual(const PRecord& rec, int height, int width, int block_size,
                              int quantizer_step);

}  // namespace rgop::codec
