#pragma once

#include <atomic>
#include <cstdint>

namespace rgop::instrument {

// Invocation counters for the operations the test-time path must never touch.
// Cheap enough to leave on unconditionally.

std::atomic<std::uint64_t>& decode_video_calls();
std::atomic<std::uint64_t>& extract_identity_calls();
std::atomic<std::uint64_t>& reconstruct_apex_calls();

}  // namespace rgop::instrument
