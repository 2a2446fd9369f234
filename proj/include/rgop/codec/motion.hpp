#pragma once

#include <cstdint>
#include <vector>

#include "rgop/image.hpp"

namespace rgop::codec {

/// Per-macroblock integer displacement field. A vector (dy, dx) at block b
/// means block pixels are predicted from the previous frame at position
/// (y - dy, x - dx); the per-pixel expansion is constant within each block.
class MotionField {
 public:
  MotionField() = default;
  MotionField(int grid_h, int grid_w, int block_size);

  int grid_h() const { return grid_h_; }
  int grid_w() const { return grid_w_; }
  int block_size() const { return block_size_; }

  std::int16_t dy(int by, int bx) const { return v_[idx(by, bx)].first; }
  std::int16_t dx(int by, int bx) const { return v_[idx(by, bx)].second; }
  void set(int by, int bx, int dy, int dx) {
    v_[idx(by, bx)] = {static_cast<std::int16_t>(dy), static_cast<std::int16_t>(dx)};
  }

  bool all_zero() const;

 private:
  std::size_t idx(int by, int bx) const {
    return static_cast<std::size_t>(by) * grid_w_ + bx;
  }

  int grid_h_ = 0;
  int grid_w_ = 0;
  int block_size_ = 8;
  std::vector<std::pair<std::int16_t, std::int16_t>> v_;
};

/// Exhaustive block matching under sum of absolute differences. For each
/// block the returned vector minimizes SAD over the (2r+1)^2 window; ties
/// break to the smallest |dy|+|dx|, then lexicographically by (dy, dx).
/// Candidate source blocks are clamped to the frame bounds.
MotionField motion_search(const Frame& prev, const Frame& cur, int block_size,
                          int search_radius);

/// Motion-compensated prediction of the next frame from prev.
Frame predict_frame(const Frame& prev, const MotionField& mv);

/// Residual such that reconstruct(prev, mv, residual) == cur exactly.
ResidualFrame compute_residual(const Frame& prev, const Frame& cur, const MotionField& mv);

/// prediction + residual, clamped to the valid intensity range [0, 255].
Frame reconstruct(const Frame& prev, const MotionField& mv, const ResidualFrame& res);

}  // namespace rgop::codec
