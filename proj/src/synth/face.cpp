#include "rgop/synth/face.hpp"

#include <cmath>

#include "rgop/errors.hpp"
#include "rgop/rng.hpp"

namespace rgop::synth {

const char* to_string(Expression e) {
  switch (e) {
    case Expression::kAnger: return "anger";
    case Expression::kDisgust: return "disgust";
    case Expression::kFear: return "fear";
    case Expression::kHappiness: return "happiness";
    case Expression::kSadness: return "sadness";
    case Expression::kSurprise: return "surprise";
    case Expression::kNeutral: return "neutral";
  }
  return "unknown";
}

Expression expression_from_string(const std::string& s) {
  for (int i = 0; i < kExpressionCount; ++i) {
    const auto e = static_cast<Expression>(i);
    if (s == to_string(e)) return e;
  }
  throw ArgumentError("unknown expression label: " + s);
}

IdentityParams IdentityParams::from_seed(std::uint64_t seed) {
  Rng rng(mix_seed(seed, "identity-params"));
  IdentityParams p;
  p.face_width_ratio = rng.uniform(0.29, 0.33);
  p.face_aspect = rng.uniform(1.22, 1.34);
  p.eye_spacing_ratio = rng.uniform(0.15, 0.19);
  p.eye_height_ratio = rng.uniform(0.050, 0.060);
  p.skin_r = rng.uniform(179.0, 217.0);
  p.skin_g = rng.uniform(140.0, 184.0);
  p.skin_b = rng.uniform(115.0, 158.0);
  return p;
}

namespace {

// Expression-dependent deltas, all scaled by intensity. Designed so each
// class has an unambiguous geometric signature at intensity 1:
//   surprise  - the only open mouth (plus wide eyes, raised brows)
//   happiness - the only upward mouth bend
//   sadness   - downward bend with raised brows
//   disgust   - downward bend with lowered brows, narrowed eyes
//   fear      - straight wide mouth, wide eyes, raised brows
//   anger     - straight mouth, narrowed eyes, lowered brows
struct ExpressionTraits {
  double bend;      // mouth bend in px at 64: >0 corners down
  double open_h;    // open-mouth half height in px
  double width_mul; // mouth width multiplier - 1
  double eye_mul;   // eye openness multiplier - 1
  double brow_lift; // brow raise in px (positive = raised)
  double brow_tilt; // inner brow end raise in px
};

ExpressionTraits traits_for(Expression e) {
  switch (e) {
    case Expression::kAnger: return {0.0, 0.0, 0.0, -0.55, -1.8, -1.6};
    case Expression::kDisgust: return {1.9, 0.0, -0.05, -0.45, -2.4, 0.0};
    case Expression::kFear: return {0.0, 0.0, 0.35, 0.80, 3.0, 0.8};
    case Expression::kHappiness: return {-3.2, 0.0, 0.20, 0.0, 0.0, 0.0};
    case Expression::kSadness: return {3.2, 0.0, -0.10, -0.20, 2.8, 1.8};
    case Expression::kSurprise: return {0.0, 5.0, -0.25, 0.80, 3.6, 0.0};
    case Expression::kNeutral: return {0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  }
  return {};
}

struct Ellipse {
  double cx, cy, rx, ry;
  bool contains(double x, double y) const {
    const double dx = (x - cx) / rx;
    const double dy = (y - cy) / ry;
    return dx * dx + dy * dy <= 1.0;
  }
};

// Thick line segment (capsule).
struct Stroke {
  double x0, y0, x1, y1, half_th;
  bool contains(double x, double y) const {
    const double vx = x1 - x0, vy = y1 - y0;
    const double len2 = vx * vx + vy * vy;
    double t = len2 > 0.0 ? ((x - x0) * vx + (y - y0) * vy) / len2 : 0.0;
    t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
    const double dx = x - (x0 + t * vx), dy = y - (y0 + t * vy);
    return dx * dx + dy * dy <= half_th * half_th;
  }
};

// Closed-mouth band: |y - centerline(x)| <= half_th over the mouth span.
struct MouthBand {
  double cx, cy, half_w, bend, half_th;
  bool contains(double x, double y) const {
    const double u = (x - cx) / half_w;
    if (u < -1.0 || u > 1.0) return false;
    const double center = cy + bend * (0.5 - u * u);
    return std::abs(y - center) <= half_th;
  }
};

struct FaceScene {
  Ellipse face;
  Ellipse eye_l, eye_r;
  Stroke brow_l, brow_r;
  bool mouth_open = false;
  Ellipse mouth_ellipse;
  MouthBand mouth_band;
  double skin[3];
};

FaceScene build_scene(const IdentityParams& id, Expression expr, double intensity, int size,
                      int offset_y, int offset_x) {
  const double s = size / 64.0;
  const ExpressionTraits tr = traits_for(expr);
  const double lam = intensity;

  FaceScene sc;
  sc.skin[0] = id.skin_r;
  sc.skin[1] = id.skin_g;
  sc.skin[2] = id.skin_b;

  const double cx = size / 2.0 + offset_x;
  const double cy = size / 2.0 + offset_y;
  const double fw = id.face_width_ratio * size;
  const double fh = fw * id.face_aspect;
  sc.face = {cx, cy, fw, fh};

  const double eye_dx = id.eye_spacing_ratio * size;
  const double eye_y = cy - 0.26 * fh;
  const double eye_rx = 4.2 * s;
  const double eye_ry = id.eye_height_ratio * size * (1.0 + tr.eye_mul * lam);
  sc.eye_l = {cx - eye_dx, eye_y, eye_rx, std::max(0.6 * s, eye_ry)};
  sc.eye_r = {cx + eye_dx, eye_y, eye_rx, std::max(0.6 * s, eye_ry)};

  // brows: fixed base distance above the eyes, in pixels, so the raise /
  // lower cue does not depend on face proportions
  const double brow_y = eye_y - 8.0 * s - tr.brow_lift * lam * s;
  const double brow_half = 4.8 * s;
  const double tilt = tr.brow_tilt * lam * s;
  // inner end toward the midline; tilt > 0 raises it
  sc.brow_l = {cx - eye_dx - brow_half, brow_y, cx - eye_dx + brow_half, brow_y - tilt, 1.3 * s};
  sc.brow_r = {cx + eye_dx - brow_half, brow_y - tilt, cx + eye_dx + brow_half, brow_y, 1.3 * s};

  const double mouth_y = cy + 0.34 * fh;
  const double mouth_w = 0.30 * fw * (1.0 + tr.width_mul * lam);
  if (tr.open_h > 0.0 && lam > 0.0) {
    sc.mouth_open = true;
    sc.mouth_ellipse = {cx, mouth_y, mouth_w, std::max(1.5 * s, tr.open_h * lam * s)};
  } else {
    sc.mouth_band = {cx, mouth_y, mouth_w, tr.bend * lam * s, 1.5 * s};
  }
  return sc;
}

}  // namespace

Frame render_face(const IdentityParams& identity, Expression expr, double intensity,
                  int size, int offset_y, int offset_x) {
  if (intensity < 0.0 || intensity > 1.0)
    throw ArgumentError("expression intensity must lie in [0,1]");
  if (size < 32 || size % 8 != 0) throw ArgumentError("frame size must be a multiple of 8, >= 32");

  const FaceScene sc = build_scene(identity, expr, intensity, size, offset_y, offset_x);
  constexpr double kBg[3] = {238.0, 238.0, 238.0};
  constexpr double kEye[3] = {16.0, 14.0, 18.0};
  constexpr double kBrow[3] = {24.0, 18.0, 14.0};
  constexpr double kMouth[3] = {70.0, 18.0, 24.0};

  Frame out(size, size);
  constexpr int kSs = 3;  // 3x3 supersampling
  for (int py = 0; py < size; ++py) {
    for (int px = 0; px < size; ++px) {
      double acc[3] = {0.0, 0.0, 0.0};
      for (int sy = 0; sy < kSs; ++sy) {
        for (int sx = 0; sx < kSs; ++sx) {
          const double x = px + (sx + 0.5) / kSs;
          const double y = py + (sy + 0.5) / kSs;
          const double* color = kBg;
          if (sc.face.contains(x, y)) {
            color = sc.skin;
            if (sc.mouth_open ? sc.mouth_ellipse.contains(x, y) : sc.mouth_band.contains(x, y))
              color = kMouth;
            else if (sc.eye_l.contains(x, y) || sc.eye_r.contains(x, y))
              color = kEye;
            else if (sc.brow_l.contains(x, y) || sc.brow_r.contains(x, y))
              color = kBrow;
          }
          acc[0] += color[0];
          acc[1] += color[1];
          acc[2] += color[2];
        }
      }
      for (int c = 0; c < 3; ++c)
        out.at(py, px, c) = std::round(acc[c] / (kSs * kSs));
    }
  }
  return out;
}

}  // namespace rgop::synth
