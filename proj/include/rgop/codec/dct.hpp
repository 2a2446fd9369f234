#pragma once

#include <array>
#include <cstddef>

namespace rgop::codec {

inline constexpr int kBlockSize = 8;
using Block = std::array<double, 64>;  // row-major 8x8

/// Orthonormal type-II 2D DCT of an 8x8 block. Preserves the L2 norm;
/// a constant block c maps to a single DC coefficient of value 8c.
Block dct8x8(const Block& samples);

/// Inverse of dct8x8 (orthonormal type-III).
Block idct8x8(const Block& coeffs);

}  // namespace rgop::codec
