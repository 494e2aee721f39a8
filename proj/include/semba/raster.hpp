#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

namespace semba {

/// Row-major 8-bit raster with interleaved channels.
class Raster {
 public:
  Raster() = default;
  Raster(int height, int width, int channels, std::uint8_t fill = 0);
  Raster(int height, int width, int channels, std::vector<std::uint8_t> samples);

  int height() const { return height_; }
  int width() const { return width_; }
  int channels() const { return channels_; }
  bool empty() const { return samples_.empty(); }

  std::uint8_t at(int y, int x, int c = 0) const {
    return samples_[index(y, x, c)];
  }
  std::uint8_t& at(int y, int x, int c = 0) { return samples_[index(y, x, c)]; }

  std::span<const std::uint8_t> samples() const { return samples_; }
  std::span<std::uint8_t> samples() { return samples_; }

  /// Sub-image [y0, y0+h) x [x0, x0+w); pixels outside the raster read as 0.
  Raster crop(int y0, int x0, int h, int w) const;

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  std::size_t index(int y, int x, int c) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) *
               static_cast<std::size_t>(channels_) +
           static_cast<std::size_t>(c);
  }

  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<std::uint8_t> samples_;
};

/// Zero-pads `src` by `pad` pixels on every side.
Raster pad_zero(const Raster& src, int pad);

/// Bilinear resize with pixel-center alignment (source position of output
/// pixel i is (i + 0.5) * in / out - 0.5). Results are rounded half-up.
Raster resize_bilinear(const Raster& src, int out_height, int out_width);

class ImageIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// PNG codec (gray, gray+alpha, RGB and RGBA; 8-bit). Palette and 16-bit
/// inputs are expanded/stripped to 8-bit.
Raster read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const Raster& raster);

}  // namespace semba
