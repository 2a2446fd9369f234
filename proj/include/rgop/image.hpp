#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rgop {

/// A planar-free, row-major (y, x, channel) RGB image. Pixel values are
/// doubles on the 8-bit intensity scale: 0..255, where content that came
/// from an 8-bit source stays exactly integer-valued. Keeping the codec
/// arithmetic on integers makes motion compensation and residual
/// round-trips exact instead of accumulating float rounding.
class Frame {
 public:
  static constexpr int kChannels = 3;

  Frame() = default;
  Frame(int height, int width);
  Frame(int height, int width, double fill);

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const { return data_.size(); }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  double& at(int y, int x, int c) {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * kChannels + c];
  }
  const double& at(int y, int x, int c) const {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * kChannels + c];
  }

  bool same_shape(const Frame& other) const {
    return height_ == other.height_ && width_ == other.width_;
  }

  /// Quantizes to 8 bits (round half away from zero, clamp to [0,255]).
  std::vector<std::uint8_t> to_u8() const;
  static Frame from_u8(const std::uint8_t* bytes, int height, int width);

  /// True if every value is an integer in [0, 255].
  bool is_u8_exact() const;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<double> data_;
};

/// Signed per-pixel correction with the same layout as Frame. Values lie in
/// [-255, 255] on the 8-bit scale and are integer-valued after decode.
class ResidualFrame {
 public:
  ResidualFrame() = default;
  ResidualFrame(int height, int width);

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const { return data_.size(); }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  double& at(int y, int x, int c) {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * Frame::kChannels + c];
  }
  const double& at(int y, int x, int c) const {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * Frame::kChannels + c];
  }

  bool same_shape(const Frame& f) const {
    return height_ == f.height() && width_ == f.width();
  }

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<double> data_;
};

// Binary PPM (P6, maxval 255) image I/O.
void write_ppm(const std::string& path, const Frame& frame);
Frame read_ppm(const std::string& path);

/// Reads a P6 PPM or, when built with libpng, an 8-bit RGB(A) PNG.
Frame read_image(const std::string& path);

}  // namespace rgop
