#include "rgop/codec/motion.hpp"

#include <cmath>
#include <cstdlib>

#include "rgop/errors.hpp"

namespace rgop::codec {

MotionField::MotionField(int grid_h, int grid_w, int block_size)
    : grid_h_(grid_h), grid_w_(grid_w), block_size_(block_size),
      v_(static_cast<std::size_t>(grid_h) * grid_w, {0, 0}) {
  if (grid_h <= 0 || grid_w <= 0 || block_size <= 0)
    throw DimensionError("motion grid dimensions must be positive");
}

bool MotionField::all_zero() const {
  for (const auto& [dy, dx] : v_)
    if (dy != 0 || dx != 0) return false;
  return true;
}

namespace {

int clamp_int(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

// SAD between the block at (by,bx) of cur and the clamped source block of
// prev displaced by (dy,dx). Values are integer-valued doubles, so the
// accumulation is exact and ties are stable.
double block_sad(const Frame& prev, const Frame& cur, int by, int bx, int bs, int dy, int dx) {
  const int sy = clamp_int(by * bs - dy, 0, prev.height() - bs);
  const int sx = clamp_int(bx * bs - dx, 0, prev.width() - bs);
  double sad = 0.0;
  for (int y = 0; y < bs; ++y) {
    const double* p = &prev.at(sy + y, sx, 0);
    const double* c = &cur.at(by * bs + y, bx * bs, 0);
    for (int i = 0; i < bs * Frame::kChannels; ++i) sad += std::abs(c[i] - p[i]);
  }
  return sad;
}

}  // namespace

MotionField motion_search(const Frame& prev, const Frame& cur, int block_size,
                          int search_radius) {
  if (!prev.same_shape(cur)) throw DimensionError("motion_search: frame shapes differ");
  if (search_radius < 0) throw ArgumentError("search_radius must be >= 0");
  if (block_size <= 0 || prev.height() % block_size != 0 || prev.width() % block_size != 0)
    throw DimensionError("frame dimensions must be multiples of block_size");

  const int gh = prev.height() / block_size;
  const int gw = prev.width() / block_size;
  MotionField field(gh, gw, block_size);

  for (int by = 0; by < gh; ++by) {
    for (int bx = 0; bx < gw; ++bx) {
      double best_sad = -1.0;
      int best_dy = 0, best_dx = 0, best_cost = 0;
      for (int dy = -search_radius; dy <= search_radius; ++dy) {
        for (int dx = -search_radius; dx <= search_radius; ++dx) {
          const double sad = block_sad(prev, cur, by, bx, block_size, dy, dx);
          const int cost = std::abs(dy) + std::abs(dx);
          const bool better =
              best_sad < 0.0 || sad < best_sad ||
              (sad == best_sad &&
               (cost < best_cost ||
                (cost == best_cost && (dy < best_dy || (dy == best_dy && dx < best_dx)))));
          if (better) {
            best_sad = sad;
            best_dy = dy;
            best_dx = dx;
            best_cost = cost;
          }
        }
      }
      field.set(by, bx, best_dy, best_dx);
    }
  }
  return field;
}

Frame predict_frame(const Frame& prev, const MotionField& mv) {
  const int bs = mv.block_size();
  if (mv.grid_h() * bs != prev.height() || mv.grid_w() * bs != prev.width())
    throw DimensionError("motion field does not match frame shape");
  Frame out(prev.height(), prev.width());
  for (int by = 0; by < mv.grid_h(); ++by) {
    for (int bx = 0; bx < mv.grid_w(); ++bx) {
      const int sy = clamp_int(by * bs - mv.dy(by, bx), 0, prev.height() - bs);
      const int sx = clamp_int(bx * bs - mv.dx(by, bx), 0, prev.width() - bs);
      for (int y = 0; y < bs; ++y) {
        const double* src = &prev.at(sy + y, sx, 0);
        double* dst = &out.at(by * bs + y, bx * bs, 0);
        for (int i = 0; i < bs * Frame::kChannels; ++i) dst[i] = src[i];
      }
    }
  }
  return out;
}

ResidualFrame compute_residual(const Frame& prev, const Frame& cur, const MotionField& mv) {
  if (!prev.same_shape(cur)) throw DimensionError("compute_residual: frame shapes differ");
  const Frame pred = predict_frame(prev, mv);
  ResidualFrame res(cur.height(), cur.width());
  for (std::size_t i = 0; i < res.size(); ++i) res.data()[i] = cur.data()[i] - pred.data()[i];
  return res;
}

Frame reconstruct(const Frame& prev, const MotionField& mv, const ResidualFrame& res) {
  if (!res.same_shape(prev)) throw DimensionError("reconstruct: residual shape differs");
  const Frame pred = predict_frame(prev, mv);
  Frame out(prev.height(), prev.width());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double v = pred.data()[i] + res.data()[i];
    if (v < 0.0) v = 0.0;
    if (v > 255.0) v = 255.0;
    out.data()[i] = v;
  }
  return out;
}

}  // namespace rgop::codec
