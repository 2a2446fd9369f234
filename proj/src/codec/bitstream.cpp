#include "rgop/codec/bitstream.hpp"

#include <cstring>
#include <fstream>

#include "rgop/errors.hpp"

namespace rgop::codec {

namespace {

void put_u8(std::vector<std::uint8_t>& out, std::uint8_t v) { out.push_back(v); }

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

void put_i16(std::vector<std::uint8_t>& out, std::int16_t v) {
  put_u16(out, static_cast<std::uint16_t>(v));
}

class Cursor {
 public:
  Cursor(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}

  std::size_t pos() const { return pos_; }

  void need(std::size_t n, const char* what) const {
    if (pos_ + n > size_) throw ParseError(std::string("truncated stream reading ") + what, pos_);
  }

  std::uint8_t u8(const char* what) {
    need(1, what);
    return data_[pos_++];
  }

  std::uint16_t u16(const char* what) {
    need(2, what);
    const std::uint16_t v = static_cast<std::uint16_t>(data_[pos_] | (data_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }

  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(data_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }

  std::int16_t i16(const char* what) { return static_cast<std::int16_t>(u16(what)); }

  const std::uint8_t* bytes(std::size_t n, const char* what) {
    need(n, what);
    const std::uint8_t* p = data_ + pos_;
    pos_ += n;
    return p;
  }

  bool done() const { return pos_ == size_; }

 private:
  const std::uint8_t* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

}  // namespace

std::size_t Bitstream::frame_count() const {
  std::size_t n = 0;
  for (const auto& g : gops) n += 1 + g.p_records.size();
  return n;
}

std::vector<std::uint8_t> serialize(const Bitstream& bs) {
  std::vector<std::uint8_t> out;
  out.insert(out.end(), Bitstream::kMagic, Bitstream::kMagic + 4);
  put_u8(out, Bitstream::kVersion);
  put_u16(out, bs.height);
  put_u16(out, bs.width);
  put_u8(out, bs.block_size);
  put_u16(out, bs.quantizer_step);
  put_u32(out, static_cast<std::uint32_t>(bs.gops.size()));

  const std::size_t i_bytes = static_cast<std::size_t>(bs.height) * bs.width * Frame::kChannels;
  const std::size_t grid = static_cast<std::size_t>(bs.grid_h()) * bs.grid_w();

  for (const auto& gop : bs.gops) {
    if (gop.i_frame_raw.size() != i_bytes) throw DimensionError("I-frame byte count mismatch");
    put_u16(out, static_cast<std::uint16_t>(gop.p_records.size()));
    out.insert(out.end(), gop.i_frame_raw.begin(), gop.i_frame_raw.end());
    for (const auto& rec : gop.p_records) {
      if (static_cast<std::size_t>(rec.motion.grid_h()) * rec.motion.grid_w() != grid)
        throw DimensionError("motion grid mismatch");
      for (int by = 0; by < rec.motion.grid_h(); ++by)
        for (int bx = 0; bx < rec.motion.grid_w(); ++bx) {
          put_i16(out, rec.motion.dy(by, bx));
          put_i16(out, rec.motion.dx(by, bx));
        }
      put_u32(out, static_cast<std::uint32_t>(rec.payload.size()));
      out.insert(out.end(), rec.payload.begin(), rec.payload.end());
    }
  }
  return out;
}

Bitstream parse(const std::uint8_t* data, std::size_t size) {
  Cursor cur(data, size);
  const std::uint8_t* magic = cur.bytes(4, "magic");
  if (std::memcmp(magic, Bitstream::kMagic, 4) != 0) throw ParseError("bad magic", 0);
  const std::uint8_t version = cur.u8("version");
  if (version != Bitstream::kVersion)
    throw ParseError("unsupported version " + std::to_string(version), cur.pos() - 1);

  Bitstream bs;
  bs.height = cur.u16("height");
  bs.width = cur.u16("width");
  bs.block_size = cur.u8("block_size");
  bs.quantizer_step = cur.u16("quantizer_step");
  if (bs.height == 0 || bs.width == 0) throw ParseError("zero frame dimensions", cur.pos());
  if (bs.block_size == 0 || bs.height % bs.block_size != 0 || bs.width % bs.block_size != 0)
    throw ParseError("frame dimensions not a multiple of block size", cur.pos());
  if (bs.quantizer_step == 0) throw ParseError("zero quantizer step", cur.pos());

  const std::uint32_t gop_count = cur.u32("gop_count");
  const std::size_t i_bytes = static_cast<std::size_t>(bs.height) * bs.width * Frame::kChannels;
  const int gh = bs.grid_h();
  const int gw = bs.grid_w();

  bs.gops.reserve(gop_count);
  for (std::uint32_t g = 0; g < gop_count; ++g) {
    Gop gop;
    const std::uint16_t p_count = cur.u16("p_count");
    const std::uint8_t* ibytes = cur.bytes(i_bytes, "I-frame");
    gop.i_frame_raw.assign(ibytes, ibytes + i_bytes);
    gop.p_records.reserve(p_count);
    for (std::uint16_t p = 0; p < p_count; ++p) {
      PRecord rec;
      rec.motion = MotionField(gh, gw, bs.block_size);
      for (int by = 0; by < gh; ++by)
        for (int bx = 0; bx < gw; ++bx) {
          const std::int16_t dy = cur.i16("motion dy");
          const std::int16_t dx = cur.i16("motion dx");
          rec.motion.set(by, bx, dy, dx);
        }
      const std::uint32_t len = cur.u32("payload length");
      rec.payload_offset = cur.pos();
      const std::uint8_t* payload = cur.bytes(len, "payload");
      rec.payload.assign(payload, payload + len);
      gop.p_records.push_back(std::move(rec));
    }
    bs.gops.push_back(std::move(gop));
  }
  if (!cur.done()) throw ParseError("trailing bytes after last GOP", cur.pos());
  return bs;
}

Bitstream parse(const std::vector<std::uint8_t>& bytes) { return parse(bytes.data(), bytes.size()); }

void save_bitstream(const std::string& path, const Bitstream& bs) {
  const auto bytes = serialize(bs);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing", path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write", path);
}

Bitstream load_bitstream(const std::string& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw IoError("cannot open", path);
  const auto size = static_cast<std::size_t>(in.tellg());
  in.seekg(0);
  std::vector<std::uint8_t> bytes(size);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(size));
  if (in.gcount() != static_cast<std::streamsize>(size)) throw IoError("short read", path);
  return parse(bytes);
}

}  // namespace rgop::codec
