#pragma once

#include <cstdint>
#include <string>

#include "rgop/image.hpp"

namespace rgop::synth {

/// The seven expression classes (AFEW label set).
enum class Expression {
  kAnger = 0,
  kDisgust,
  kFear,
  kHappiness,
  kSadness,
  kSurprise,
  kNeutral,
};

inline constexpr int kExpressionCount = 7;

const char* to_string(Expression e);
Expression expression_from_string(const std::string& s);

/// Identity factors, drawn deterministically from an identity seed. These
/// control who the face is; expression and intensity control what it does.
struct IdentityParams {
  double face_width_ratio;   // face half-width / frame width
  double face_aspect;        // face half-height / half-width
  double eye_spacing_ratio;  // eye center offset from midline / frame width
  double eye_height_ratio;   // eye half-height / frame height (neutral)
  double skin_r, skin_g, skin_b;  // 8-bit intensities

  static IdentityParams from_seed(std::uint64_t seed);
};

/// Renders one face. intensity = 0 gives the identical neutral face for
/// every class; intensity = 1 is the apex. offset shifts the whole face by
/// whole pixels (jitter). Output values are integers on the 8-bit grid.
Frame render_face(const IdentityParams& identity, Expression expr, double intensity,
                  int size = 64, int offset_y = 0, int offset_x = 0);

}  // namespace rgop::synth
