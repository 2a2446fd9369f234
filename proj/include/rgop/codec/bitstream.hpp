#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rgop/codec/motion.hpp"

namespace rgop::codec {

/// One predicted frame as stored: motion grid plus the entropy-coded
/// residual payload (kept as bytes so serialization is byte-exact).
struct PRecord {
  MotionField motion;
  std::vector<std::uint8_t> payload;
  // offset of the payload in the enclosing stream; 0 for streams built in
  // memory. Used to report absolute positions in parse errors.
  std::size_t payload_offset = 0;
};

/// An I-frame (raw 8-bit dump, lossless) and its dependent P-frames.
struct Gop {
  std::vector<std::uint8_t> i_frame_raw;
  std::vector<PRecord> p_records;

  Frame i_frame(int height, int width) const {
    return Frame::from_u8(i_frame_raw.data(), height, width);
  }
};

/// Parsed compressed video. Serializes to the RGOP container:
///   magic "RGOP", u8 version, u16 h, u16 w, u8 block_size,
///   u16 quantizer_step, u32 gop_count, then per GOP: u16 p_count,
///   raw I-frame bytes, and per P-frame the motion grid as i16 (dy, dx)
///   pairs followed by a u32-length-prefixed entropy payload.
/// All integers little-endian.
struct Bitstream {
  static constexpr char kMagic[4] = {'R', 'G', 'O', 'P'};
  static constexpr std::uint8_t kVersion = 1;

  std::uint16_t height = 0;
  std::uint16_t width = 0;
  std::uint8_t block_size = 8;
  std::uint16_t quantizer_step = 4;
  std::vector<Gop> gops;

  int grid_h() const { return height / block_size; }
  int grid_w() const { return width / block_size; }
  std::size_t frame_count() const;
};

std::vector<std::uint8_t> serialize(const Bitstream& bs);
Bitstream parse(const std::uint8_t* data, std::size_t size);
Bitstream parse(const std::vector<std::uint8_t>& bytes);

void save_bitstream(const std::string& path, const Bitstream& bs);
Bitstream load_bitstream(const std::string& path);

}  // namespace rgop::codec
