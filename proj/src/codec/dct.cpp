#include "rgop/codec/dct.hpp"

#include <cmath>

namespace rgop::codec {

namespace {

// Orthonormal DCT-II basis: C[k][n] = s_k * cos(pi*(2n+1)*k/16),
// s_0 = sqrt(1/8), s_k = 1/2 otherwise. C is orthogonal, so the inverse
// transform is its transpose.
struct Basis {
  double c[8][8];
  Basis() {
    const double pi = 3.14159265358979323846;
    for (int k = 0; k < 8; ++k) {
      const double s = k == 0 ? std::sqrt(1.0 / 8.0) : 0.5;
      for (int n = 0; n < 8; ++n) c[k][n] = s * std::cos(pi * (2 * n + 1) * k / 16.0);
    }
  }
};

const Basis& basis() {
  static const Basis b;
  return b;
}

}  // namespace

Block dct8x8(const Block& samples) {
  const auto& C = basis().c;
  double tmp[8][8];
  // rows: tmp = x * C^T
  for (int y = 0; y < 8; ++y) {
    for (int k = 0; k < 8; ++k) {
      double acc = 0.0;
      for (int n = 0; n < 8; ++n) acc += samples[y * 8 + n] * C[k][n];
      tmp[y][k] = acc;
    }
  }
  // columns: out = C * tmp
  Block out;
  for (int k = 0; k < 8; ++k) {
    for (int x = 0; x < 8; ++x) {
      double acc = 0.0;
      for (int n = 0; n < 8; ++n) acc += C[k][n] * tmp[n][x];
      out[k * 8 + x] = acc;
    }
  }
  return out;
}

Block idct8x8(const Block& coeffs) {
  const auto& C = basis().c;
  double tmp[8][8];
  // columns: tmp = C^T * X
  for (int n = 0; n < 8; ++n) {
    for (int x = 0; x < 8; ++x) {
      double acc = 0.0;
      for (int k = 0; k < 8; ++k) acc += C[k][n] * coeffs[k * 8 + x];
      tmp[n][x] = acc;
    }
  }
  // rows: out = tmp * C
  Block out;
  for (int y = 0; y < 8; ++y) {
    for (int n = 0; n < 8; ++n) {
      double acc = 0.0;
      for (int k = 0; k < 8; ++k) acc += tmp[y][k] * C[k][n];
      out[y * 8 + n] = acc;
    }
  }
  return out;
}

}  // namespace rgop::codec
