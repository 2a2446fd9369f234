#include "rgop/codec/quant.hpp"

#include <cmath>

#include "rgop/errors.hpp"

namespace rgop::codec {

QuantizedBlock quantize(const Block& coeffs, int step) {
  if (step < 1) throw ConfigError("quantizer step must be >= 1");
  QuantizedBlock out;
  for (int i = 0; i < 64; ++i) {
    // std::round is round-half-away-from-zero
    const double q = std::round(coeffs[i] / step);
    out.levels[i] = static_cast<std::int16_t>(q);
  }
  return out;
}

Block dequantize(const QuantizedBlock& block, int step) {
  if (step < 1) throw ConfigError("quantizer step must be >= 1");
  Block out;
  for (int i = 0; i < 64; ++i) out[i] = static_cast<double>(block.levels[i]) * step;
  return out;
}

}  // namespace rgop::codec
