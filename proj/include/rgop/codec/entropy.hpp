#pragma once

#include <cstdint>
#include <vector>

#include "rgop/codec/quant.hpp"

namespace rgop::codec {

/// MSB-first bit writer.
class BitWriter {
 public:
  void put_bit(int bit);
  void put_bits(std::uint32_t value, int count);  // count <= 32, MSB first
  void put_ue(std::uint32_t value);               // unsigned Exp-Golomb
  void put_se(std::int32_t value);                // signed Exp-Golomb, value != 0

  /// Pads the final partial byte with zero bits and returns the buffer.
  std::vector<std::uint8_t> finish();

 private:
  std::vector<std::uint8_t> bytes_;
  std::uint8_t cur_ = 0;
  int nbits_ = 0;
};

/// MSB-first bit reader over a byte span. Throws ParseError past the end.
class BitReader {
 public:
  BitReader(const std::uint8_t* data, std::size_t size, std::size_t base_offset = 0);

  int get_bit();
  std::uint32_t get_ue();
  std::int32_t get_se();

  std::size_t byte_pos() const { return pos_; }
  bool at_end() const { return pos_ == size_ && nbits_ == 0; }

  /// True when only zero padding bits remain in the current byte and no
  /// further bytes follow.
  bool only_padding_left() const;

 private:
  const std::uint8_t* data_;
  std::size_t size_;
  std::size_t base_;   // offset of data_[0] in the enclosing stream, for errors
  std::size_t pos_ = 0;
  std::uint8_t cur_ = 0;
  int nbits_ = 0;  // bits left in cur_
};

/// Zigzag scan order for an 8x8 block: index i of the scan -> flat position.
const std::array<int, 64>& zigzag_order();

/// Entropy-codes the residual blocks of one frame: zigzag scan, zero runs
/// and nonzero levels as Exp-Golomb symbols, one end marker per block and a
/// frame end marker, zero-padded to a byte boundary.
std::vector<std::uint8_t> entropy_encode(const std::vector<QuantizedBlock>& blocks);

/// Inverse of entropy_encode. block_count must match the encoder's. Throws
/// ParseError (with stream offset) on truncation, corrupt symbols or
/// trailing garbage after the frame end marker.
std::vector<QuantizedBlock> entropy_decode(const std::uint8_t* payload, std::size_t size,
                                           std::size_t block_count,
                                           std::size_t stream_offset = 0);

}  // namespace rgop::codec
