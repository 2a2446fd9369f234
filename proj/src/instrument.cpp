#include "rgop/instrument.hpp"

namespace rgop::instrument {

std::atomic<std::uint64_t>& decode_video_calls() {
  static std::atomic<std::uint64_t> c{0};
  return c;
}

std::atomic<std::uint64_t>& extract_identity_calls() {
  static std::atomic<std::uint64_t> c{0};
  return c;
}

std::atomic<std::uint64_t>& reconstruct_apex_calls() {
  static std::atomic<std::uint64_t> c{0};
  return c;
}

}  // namespace rgop::instrument
