#include "rgop/image.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "rgop/errors.hpp"

#ifdef RGOP_HAS_PNG
#include <png.h>
#endif

namespace rgop {

Frame::Frame(int height, int width)
    : height_(height), width_(width),
      data_(static_cast<std::size_t>(height) * width * kChannels, 0.0) {
  if (height <= 0 || width <= 0) throw DimensionError("frame dimensions must be positive");
}

Frame::Frame(int height, int width, double fill) : Frame(height, width) {
  for (auto& v : data_) v = fill;
}

std::vector<std::uint8_t> Frame::to_u8() const {
  std::vector<std::uint8_t> out(data_.size());
  for (std::size_t i = 0; i < data_.size(); ++i) {
    double v = std::round(data_[i]);
    if (v < 0.0) v = 0.0;
    if (v > 255.0) v = 255.0;
    out[i] = static_cast<std::uint8_t>(v);
  }
  return out;
}

Frame Frame::from_u8(const std::uint8_t* bytes, int height, int width) {
  Frame f(height, width);
  for (std::size_t i = 0; i < f.data_.size(); ++i) f.data_[i] = bytes[i];
  return f;
}

bool Frame::is_u8_exact() const {
  for (double v : data_) {
    if (v < 0.0 || v > 255.0 || v != std::floor(v)) return false;
  }
  return true;
}

ResidualFrame::ResidualFrame(int height, int width)
    : height_(height), width_(width),
      data_(static_cast<std::size_t>(height) * width * Frame::kChannels, 0.0) {
  if (height <= 0 || width <= 0) throw DimensionError("residual dimensions must be positive");
}

void write_ppm(const std::string& path, const Frame& frame) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing", path);
  out << "P6\n" << frame.width() << " " << frame.height() << "\n255\n";
  const auto bytes = frame.to_u8();
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write", path);
}

namespace {

// Reads one whitespace-delimited token, skipping '#' comments.
std::string ppm_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (!std::isspace(c)) {
      tok.push_back(static_cast<char>(c));
      while ((c = in.get()) != EOF && !std::isspace(c)) tok.push_back(static_cast<char>(c));
      break;
    }
  }
  return tok;
}

}  // namespace

Frame read_ppm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open", path);
  if (ppm_token(in) != "P6") throw ParseError("not a P6 PPM: " + path, 0);
  int width = 0, height = 0, maxval = 0;
  try {
    width = std::stoi(ppm_token(in));
    height = std::stoi(ppm_token(in));
    maxval = std::stoi(ppm_token(in));
  } catch (const std::exception&) {
    throw ParseError("bad PPM header: " + path, static_cast<std::size_t>(in.tellg()));
  }
  if (width <= 0 || height <= 0 || maxval != 255)
    throw ParseError("unsupported PPM header (need maxval 255): " + path,
                     static_cast<std::size_t>(in.tellg()));
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(width) * height * 3);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (in.gcount() != static_cast<std::streamsize>(bytes.size()))
    throw ParseError("truncated PPM pixel data: " + path, static_cast<std::size_t>(in.tellg()));
  return Frame::from_u8(bytes.data(), height, width);
}

#ifdef RGOP_HAS_PNG
namespace {

Frame read_png(const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "rb");
  if (!fp) throw IoError("cannot open", path);
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    std::fclose(fp);
    throw Error("libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw ParseError("corrupt PNG: " + path, 0);
  }
  png_init_io(png, fp);
  png_read_info(png, info);

  png_set_strip_16(png);
  png_set_palette_to_rgb(png);
  png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_strip_alpha(png);
  if (png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY ||
      png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY_ALPHA)
    png_set_gray_to_rgb(png);
  png_read_update_info(png, info);

  const int width = static_cast<int>(png_get_image_width(png, info));
  const int height = static_cast<int>(png_get_image_height(png, info));
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(width) * height * 3);
  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y)
    rows[y] = bytes.data() + static_cast<std::size_t>(y) * width * 3;
  png_read_image(png, rows.data());
  png_destroy_read_struct(&png, &info, nullptr);
  std::fclose(fp);
  return Frame::from_u8(bytes.data(), height, width);
}

}  // namespace
#endif

Frame read_image(const std::string& path) {
  if (path.size() >= 4) {
    const std::string ext = path.substr(path.size() - 4);
    if (ext == ".png" || ext == ".PNG") {
#ifdef RGOP_HAS_PNG
      return read_png(path);
#else
      throw Error("PNG support not built in (libpng missing): " + path);
#endif
    }
  }
  return read_ppm(path);
}

}  // namespace rgop
