#include "rgop/ad/param_store.hpp"

#include <cstring>
#include <fstream>

#include "rgop/errors.hpp"

namespace rgop::ad {

void ParamStore::add(const std::string& name, Tensor value, bool trainable) {
  if (entries_.count(name)) throw ArgumentError("duplicate parameter name: " + name);
  entries_[name] = Entry{std::move(value), trainable};
}

Tensor& ParamStore::at(const std::string& name) {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw ArgumentError("unknown parameter: " + name);
  return it->second.value;
}

const Tensor& ParamStore::at(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw ArgumentError("unknown parameter: " + name);
  return it->second.value;
}

bool ParamStore::trainable(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw ArgumentError("unknown parameter: " + name);
  return it->second.trainable;
}

void ParamStore::freeze_prefix(const std::string& prefix) {
  for (auto& [name, entry] : entries_)
    if (name.rfind(prefix, 0) == 0) entry.trainable = false;
}

void ParamStore::adopt(const ParamStore& other, const std::string& prefix, bool trainable) {
  for (const auto& [name, entry] : other.entries_) add(prefix + name, entry.value, trainable);
}

namespace {

// Checkpoint values are float32 on disk; keeping hashing and serialization
// on the same representation makes "same hash" mean "same checkpoint".
void append_f32(std::vector<std::uint8_t>& out, double v) {
  const float f = static_cast<float>(v);
  std::uint32_t bits;
  std::memcpy(&bits, &f, 4);
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((bits >> (8 * i)) & 0xff));
}

void append_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

void append_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

std::vector<std::uint8_t> serialize_store(const ParamStore& store) {
  std::vector<std::uint8_t> out;
  out.insert(out.end(), {'R', 'P', 'R', 'M'});
  out.push_back(1);  // version
  append_u32(out, static_cast<std::uint32_t>(store.size()));
  for (const auto& [name, entry] : store) {
    if (name.size() > 0xffff) throw ArgumentError("parameter name too long: " + name);
    append_u16(out, static_cast<std::uint16_t>(name.size()));
    out.insert(out.end(), name.begin(), name.end());
    out.push_back(entry.trainable ? 1 : 0);
    out.push_back(static_cast<std::uint8_t>(entry.value.ndim()));
    for (int i = 0; i < entry.value.ndim(); ++i)
      append_u32(out, static_cast<std::uint32_t>(entry.value.dim(i)));
    for (std::size_t i = 0; i < entry.value.size(); ++i) append_f32(out, entry.value[i]);
  }
  return out;
}

}  // namespace

std::uint64_t ParamStore::content_hash() const {
  const auto bytes = serialize_store(*this);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

void ParamStore::save(const std::string& path) const {
  const auto bytes = serialize_store(*this);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing", path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write", path);
}

ParamStore ParamStore::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw IoError("cannot open", path);
  const auto size = static_cast<std::size_t>(in.tellg());
  in.seekg(0);
  std::vector<std::uint8_t> bytes(size);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(size));
  if (in.gcount() != static_cast<std::streamsize>(size)) throw IoError("short read", path);

  std::size_t pos = 0;
  auto need = [&](std::size_t n, const char* what) {
    if (pos + n > bytes.size())
      throw ParseError(std::string("truncated checkpoint reading ") + what, pos);
  };
  auto get_u16 = [&](const char* what) {
    need(2, what);
    const std::uint16_t v = static_cast<std::uint16_t>(bytes[pos] | (bytes[pos + 1] << 8));
    pos += 2;
    return v;
  };
  auto get_u32 = [&](const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[pos + i]) << (8 * i);
    pos += 4;
    return v;
  };

  need(5, "header");
  if (std::memcmp(bytes.data(), "RPRM", 4) != 0) throw ParseError("bad checkpoint magic", 0);
  if (bytes[4] != 1) throw ParseError("unsupported checkpoint version", 4);
  pos = 5;

  ParamStore store;
  const std::uint32_t count = get_u32("entry count");
  for (std::uint32_t e = 0; e < count; ++e) {
    const std::uint16_t name_len = get_u16("name length");
    need(name_len, "name");
    std::string name(reinterpret_cast<const char*>(bytes.data() + pos), name_len);
    pos += name_len;
    need(2, "flags");
    const bool trainable = bytes[pos++] != 0;
    const int ndim = bytes[pos++];
    std::vector<int> shape(static_cast<std::size_t>(ndim));
    for (int i = 0; i < ndim; ++i) shape[static_cast<std::size_t>(i)] = static_cast<int>(get_u32("dim"));
    const std::size_t n = shape_size(shape);
    need(n * 4, "data");
    std::vector<double> data(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::uint32_t bits = 0;
      for (int j = 0; j < 4; ++j) bits |= static_cast<std::uint32_t>(bytes[pos + j]) << (8 * j);
      pos += 4;
      float f;
      std::memcpy(&f, &bits, 4);
      data[i] = static_cast<double>(f);
    }
    store.add(name, Tensor(std::move(shape), std::move(data)), trainable);
  }
  if (pos != bytes.size()) throw ParseError("trailing bytes in checkpoint", pos);
  return store;
}

}  // namespace rgop::ad
