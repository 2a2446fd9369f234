#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "rgop/ad/tensor.hpp"

namespace rgop::ad {

/// Named parameter tensors with a trainable flag. Frozen entries receive no
/// gradients and no optimizer updates. Iteration order is the sorted name
/// order, which keeps everything downstream deterministic.
class ParamStore {
 public:
  struct Entry {
    Tensor value;
    bool trainable = true;
  };

  void add(const std::string& name, Tensor value, bool trainable = true);
  bool contains(const std::string& name) const { return entries_.count(name) != 0; }

  Tensor& at(const std::string& name);
  const Tensor& at(const std::string& name) const;
  bool trainable(const std::string& name) const;

  /// Marks every parameter whose name starts with prefix as frozen.
  void freeze_prefix(const std::string& prefix);

  /// Copies every entry of other under prefix+name.
  void adopt(const ParamStore& other, const std::string& prefix, bool trainable);

  std::size_t size() const { return entries_.size(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }
  auto begin() { return entries_.begin(); }
  auto end() { return entries_.end(); }

  /// FNV-1a over names, shapes and float32 data; the checkpoint identity.
  std::uint64_t content_hash() const;

  /// RPRM checkpoint: magic "RPRM", u8 version, u32 count, then per entry
  /// u16 name length + UTF-8 name, u8 trainable, u8 ndim, u32 dims,
  /// little-endian float32 data. Values round-trip through float32.
  void save(const std::string& path) const;
  static ParamStore load(const std::string& path);

 private:
  std::map<std::string, Entry> entries_;
};

}  // namespace rgop::ad
