#pragma once

#include <cstdint>
#include <vector>

#include "rgop/synth/face.hpp"

namespace rgop::synth {

/// Where the maximal-intensity frame sits in a sequence.
enum class ApexPolicy {
  kLast,    // neutral -> apex at the final frame
  kMiddle,  // neutral -> apex at floor(T/2) -> back to neutral
};

const char* to_string(ApexPolicy p);
ApexPolicy apex_policy_from_string(const std::string& s);

int apex_index(int frame_count, ApexPolicy policy);

/// Intensity ramp: 0 at t=0, 1 at the apex, and back to 0 at the end for
/// the middle policy.
double intensity_at(int t, int frame_count, ApexPolicy policy);

struct GeneratedSequence {
  std::vector<Frame> frames;
  int apex_index = 0;
};

/// Renders a jittered expression sequence: per-frame whole-pixel
/// translation (at most 1 px) on top of the intensity ramp, so motion
/// search has real work even before the expression moves.
GeneratedSequence generate_sequence(std::uint64_t identity_seed, Expression expr,
                                    int frame_count, ApexPolicy policy,
                                    std::uint64_t jitter_seed, int size = 64);

}  // namespace rgop::synth
