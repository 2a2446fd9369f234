#pragma once

#include <array>
#include <cstdint>

#include "rgop/codec/dct.hpp"

namespace rgop::codec {

/// 8x8 integer DCT coefficients after uniform scalar quantization.
struct QuantizedBlock {
  std::array<std::int16_t, 64> levels{};

  bool operator==(const QuantizedBlock&) const = default;
};

/// Uniform scalar quantizer, round half away from zero. step must be >= 1.
QuantizedBlock quantize(const Block& coeffs, int step);

/// Midpoint reconstruction: level * step.
Block dequantize(const QuantizedBlock& block, int step);

}  // namespace rgop::codec
