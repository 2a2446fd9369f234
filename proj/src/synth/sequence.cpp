#include "rgop/synth/sequence.hpp"

#include "rgop/errors.hpp"
#include "rgop/rng.hpp"

namespace rgop::synth {

const char* to_string(ApexPolicy p) { return p == ApexPolicy::kLast ? "last" : "middle"; }

ApexPolicy apex_policy_from_string(const std::string& s) {
  if (s == "last") return ApexPolicy::kLast;
  if (s == "middle") return ApexPolicy::kMiddle;
  throw ArgumentError("unknown apex policy: " + s);
}

int apex_index(int frame_count, ApexPolicy policy) {
  return policy == ApexPolicy::kLast ? frame_count - 1 : frame_count / 2;
}

double intensity_at(int t, int frame_count, ApexPolicy policy) {
  const int apex = apex_index(frame_count, policy);
  if (t <= apex) return apex == 0 ? 1.0 : static_cast<double>(t) / apex;
  // middle policy past the apex: ramp back toward neutral
  return static_cast<double>(frame_count - 1 - t) / (frame_count - 1 - apex);
}

GeneratedSequence generate_sequence(std::uint64_t identity_seed, Expression expr,
                                    int frame_count, ApexPolicy policy,
                                    std::uint64_t jitter_seed, int size) {
  if (frame_count < 2) throw ArgumentError("sequence needs at least 2 frames");

  const IdentityParams id = IdentityParams::from_seed(identity_seed);
  Rng jitter(mix_seed(jitter_seed, "sequence-jitter"));

  GeneratedSequence out;
  out.apex_index = apex_index(frame_count, policy);
  out.frames.reserve(static_cast<std::size_t>(frame_count));
  for (int t = 0; t < frame_count; ++t) {
    // zero-biased so roughly half the frames sit still on each axis
    static constexpr int kSteps[4] = {-1, 0, 0, 1};
    const int dy = kSteps[jitter.below(4)];
    const int dx = kSteps[jitter.below(4)];
    out.frames.push_back(
        render_face(id, expr, intensity_at(t, frame_count, policy), size, dy, dx));
  }
  return out;
}

}  // namespace rgop::synth
