#include "rgop/codec/entropy.hpp"

#include "rgop/errors.hpp"

namespace rgop::codec {

namespace {

// Block-start symbols: 0 ends the current block, 1..64 encode a zero run of
// length s-1 followed by a signed level, 65 ends the frame. All-zero
// residual frames therefore cost one bit per block plus one frame marker.
constexpr std::uint32_t kEndOfBlock = 0;
constexpr std::uint32_t kRunBias = 1;
constexpr std::uint32_t kFrameEnd = 65;

int bit_width(std::uint32_t v) {
  int w = 0;
  while (v) {
    ++w;
    v >>= 1;
  }
  return w;
}

}  // namespace

void BitWriter::put_bit(int bit) {
  cur_ = static_cast<std::uint8_t>((cur_ << 1) | (bit & 1));
  if (++nbits_ == 8) {
    bytes_.push_back(cur_);
    cur_ = 0;
    nbits_ = 0;
  }
}

void BitWriter::put_bits(std::uint32_t value, int count) {
  for (int i = count - 1; i >= 0; --i) put_bit(static_cast<int>((value >> i) & 1));
}

void BitWriter::put_ue(std::uint32_t value) {
  const std::uint32_t v = value + 1;
  const int w = bit_width(v);
  for (int i = 0; i < w - 1; ++i) put_bit(0);
  put_bits(v, w);
}

void BitWriter::put_se(std::int32_t value) {
  // nonzero level -> positive code: l>0 maps to 2l-1, l<0 maps to -2l
  const std::uint32_t code =
      value > 0 ? static_cast<std::uint32_t>(2 * value - 1)
                : static_cast<std::uint32_t>(-2 * static_cast<std::int64_t>(value));
  put_ue(code);
}

std::vector<std::uint8_t> BitWriter::finish() {
  while (nbits_ != 0) put_bit(0);
  return std::move(bytes_);
}

BitReader::BitReader(const std::uint8_t* data, std::size_t size, std::size_t base_offset)
    : data_(data), size_(size), base_(base_offset) {}

int BitReader::get_bit() {
  if (nbits_ == 0) {
    if (pos_ >= size_) throw ParseError("entropy payload truncated", base_ + pos_);
    cur_ = data_[pos_++];
    nbits_ = 8;
  }
  --nbits_;
  return (cur_ >> nbits_) & 1;
}

std::uint32_t BitReader::get_ue() {
  int zeros = 0;
  while (get_bit() == 0) {
    if (++zeros > 31) throw ParseError("corrupt Exp-Golomb prefix", base_ + pos_);
  }
  std::uint32_t v = 1;
  for (int i = 0; i < zeros; ++i) v = (v << 1) | static_cast<std::uint32_t>(get_bit());
  return v - 1;
}

std::int32_t BitReader::get_se() {
  const std::uint32_t code = get_ue();
  if (code == 0) throw ParseError("zero level in entropy stream", base_ + pos_);
  if (code & 1) return static_cast<std::int32_t>((code + 1) / 2);
  return -static_cast<std::int32_t>(code / 2);
}

bool BitReader::only_padding_left() const {
  if (pos_ < size_) return false;  // whole bytes remain unread only if pos_==size_
  if (nbits_ == 0) return true;
  const std::uint8_t mask = static_cast<std::uint8_t>((1u << nbits_) - 1);
  return (cur_ & mask) == 0;
}

const std::array<int, 64>& zigzag_order() {
  static const std::array<int, 64> order = [] {
    std::array<int, 64> o{};
    int idx = 0;
    for (int d = 0; d < 15; ++d) {
      // walk each anti-diagonal, alternating direction
      if (d % 2 == 0) {
        for (int y = std::min(d, 7); y >= 0 && d - y <= 7; --y) o[idx++] = y * 8 + (d - y);
      } else {
        for (int x = std::min(d, 7); x >= 0 && d - x <= 7; --x) o[idx++] = (d - x) * 8 + x;
      }
    }
    return o;
  }();
  return order;
}

std::vector<std::uint8_t> entropy_encode(const std::vector<QuantizedBlock>& blocks) {
  const auto& order = zigzag_order();
  BitWriter w;
  for (const auto& block : blocks) {
    int run = 0;
    for (int i = 0; i < 64; ++i) {
      const std::int32_t level = block.levels[order[i]];
      if (level == 0) {
        ++run;
        continue;
      }
      w.put_ue(static_cast<std::uint32_t>(run) + kRunBias);
      w.put_se(level);
      run = 0;
    }
    w.put_ue(kEndOfBlock);
  }
  w.put_ue(kFrameEnd);
  return w.finish();
}

std::vector<QuantizedBlock> entropy_decode(const std::uint8_t* payload, std::size_t size,
                                           std::size_t block_count,
                                           std::size_t stream_offset) {
  const auto& order = zigzag_order();
  BitReader r(payload, size, stream_offset);
  std::vector<QuantizedBlock> blocks(block_count);
  for (auto& block : blocks) {
    int pos = 0;
    for (;;) {
      const std::uint32_t sym = r.get_ue();
      if (sym == kEndOfBlock) break;
      if (sym >= kFrameEnd)
        throw ParseError("unexpected frame marker inside block", stream_offset + r.byte_pos());
      pos += static_cast<int>(sym - kRunBias);
      if (pos >= 64)
        throw ParseError("zero run overflows block", stream_offset + r.byte_pos());
      const std::int32_t level = r.get_se();
      if (level < -32768 || level > 32767)
        throw ParseError("level out of 16-bit range", stream_offset + r.byte_pos());
      block.levels[order[pos]] = static_cast<std::int16_t>(level);
      ++pos;
    }
  }
  if (r.get_ue() != kFrameEnd)
    throw ParseError("missing frame end marker", stream_offset + r.byte_pos());
  if (!r.only_padding_left())
    throw ParseError("trailing garbage after frame end marker", stream_offset + r.byte_pos());
  return blocks;
}

}  // namespace rgop::codec
