#include "rgop/codec/codec.hpp"

#include <cmath>

#include "rgop/codec/dct.hpp"
#include "rgop/codec/entropy.hpp"
#include "rgop/codec/quant.hpp"
#include "rgop/errors.hpp"
#include "rgop/instrument.hpp"

namespace rgop::codec {

namespace {

Block extract_block(const ResidualFrame& res, int by, int bx, int c) {
  Block b;
  for (int y = 0; y < kBlockSize; ++y)
    for (int x = 0; x < kBlockSize; ++x)
      b[y * kBlockSize + x] = res.at(by * kBlockSize + y, bx * kBlockSize + x, c);
  return b;
}

void place_block(ResidualFrame& res, const Block& b, int by, int bx, int c) {
  for (int y = 0; y < kBlockSize; ++y)
    for (int x = 0; x < kBlockSize; ++x)
      res.at(by * kBlockSize + y, bx * kBlockSize + x, c) = b[y * kBlockSize + x];
}

// Transform + quantize all residual blocks of one frame. Channel-major so
// the decoder iterates identically.
std::vector<QuantizedBlock> residual_to_blocks(const ResidualFrame& res, int step) {
  const int gh = res.height() / kBlockSize;
  const int gw = res.width() / kBlockSize;
  std::vector<QuantizedBlock> blocks;
  blocks.reserve(static_cast<std::size_t>(gh) * gw * Frame::kChannels);
  for (int c = 0; c < Frame::kChannels; ++c)
    for (int by = 0; by < gh; ++by)
      for (int bx = 0; bx < gw; ++bx)
        blocks.push_back(quantize(dct8x8(extract_block(res, by, bx, c)), step));
  return blocks;
}

// Dequantize + inverse transform, rounded to the integer grid the decoder
// reconstructs on. The rounding is what keeps integer-grid content exact
// through a step-1 round trip.
ResidualFrame blocks_to_residual(const std::vector<QuantizedBlock>& blocks, int height,
                                 int width, int step) {
  const int gh = height / kBlockSize;
  const int gw = width / kBlockSize;
  ResidualFrame res(height, width);
  std::size_t i = 0;
  for (int c = 0; c < Frame::kChannels; ++c)
    for (int by = 0; by < gh; ++by)
      for (int bx = 0; bx < gw; ++bx) {
        Block b = idct8x8(dequantize(blocks[i++], step));
        for (auto& v : b) v = std::round(v);
        place_block(res, b, by, bx, c);
      }
  return res;
}

}  // namespace

ResidualFrame decode_residual(const PRecord& rec, int height, int width, int block_size,
                              int quantizer_step) {
  if (block_size != kBlockSize) throw ConfigError("only 8x8 blocks are supported");
  const std::size_t block_count =
      static_cast<std::size_t>(height / kBlockSize) * (width / kBlockSize) * Frame::kChannels;
  const auto blocks = entropy_decode(rec.payload.data(), rec.payload.size(), block_count,
                                     rec.payload_offset);
  return blocks_to_residual(blocks, height, width, quantizer_step);
}

Bitstream encode_video(const std::vector<Frame>& frames, const EncodeParams& params) {
  if (frames.empty()) throw ArgumentError("encode_video: no frames");
  if (params.gop_length < 1) throw ArgumentError("gop_length must be >= 1");
  if (params.quantizer_step < 1) throw ConfigError("quantizer step must be >= 1");
  if (params.block_size != kBlockSize) throw ConfigError("only 8x8 blocks are supported");
  if (params.search_radius < 0) throw ArgumentError("search_radius must be >= 0");

  const Frame& first = frames.front();
  for (const auto& f : frames)
    if (!f.same_shape(first)) throw DimensionError("encode_video: non-uniform frame shapes");
  if (first.height() % params.block_size != 0 || first.width() % params.block_size != 0)
    throw DimensionError("frame dimensions must be multiples of block_size");
  if (first.height() > 0xffff || first.width() > 0xffff)
    throw DimensionError("frame dimensions exceed 16-bit header fields");

  Bitstream bs;
  bs.height = static_cast<std::uint16_t>(first.height());
  bs.width = static_cast<std::uint16_t>(first.width());
  bs.block_size = static_cast<std::uint8_t>(params.block_size);
  bs.quantizer_step = static_cast<std::uint16_t>(params.quantizer_step);

  Frame recon;  // decoder-side state, chained across P-frames
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (i % static_cast<std::size_t>(params.gop_length) == 0) {
      Gop gop;
      gop.i_frame_raw = frames[i].to_u8();
      recon = Frame::from_u8(gop.i_frame_raw.data(), first.height(), first.width());
      bs.gops.push_back(std::move(gop));
      continue;
    }
    // P-frame: search against the reconstruction, not the original
    const MotionField mv =
        motion_search(recon, frames[i], params.block_size, params.search_radius);
    const ResidualFrame res = compute_residual(recon, frames[i], mv);
    const auto blocks = residual_to_blocks(res, params.quantizer_step);

    PRecord rec;
    rec.motion = mv;
    rec.payload = entropy_encode(blocks);
    bs.gops.back().p_records.push_back(std::move(rec));

    const ResidualFrame decoded_res =
        blocks_to_residual(blocks, first.height(), first.width(), params.quantizer_step);
    recon = reconstruct(recon, mv, decoded_res);
  }
  return bs;
}

std::vector<Frame> decode_video(const Bitstream& bs) {
  instrument::decode_video_calls().fetch_add(1, std::memory_order_relaxed);
  std::vector<Frame> frames;
  frames.reserve(bs.frame_count());
  for (const auto& gop : bs.gops) {
    Frame recon = gop.i_frame(bs.height, bs.width);
    frames.push_back(recon);
    for (const auto& rec : gop.p_records) {
      const ResidualFrame res =
          decode_residual(rec, bs.height, bs.width, bs.block_size, bs.quantizer_step);
      recon = reconstruct(recon, rec.motion, res);
      frames.push_back(recon);
    }
  }
  return frames;
}

std::optional<GopView> CompressedReader::next() {
  if (index_ >= bs_->gops.size()) return std::nullopt;
  const Gop& gop = bs_->gops[index_++];
  GopView view;
  view.i_frame = gop.i_frame(bs_->height, bs_->width);
  view.p_frames.reserve(gop.p_records.size());
  for (const auto& rec : gop.p_records) {
    view.p_frames.emplace_back(
        rec.motion,
        decode_residual(rec, bs_->height, bs_->width, bs_->block_size, bs_->quantizer_step));
  }
  return view;
}

}  // namespace rgop::codec
