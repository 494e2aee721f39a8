#include "semba/raster.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <string>

namespace semba {

Raster::Raster(int height, int width, int channels, std::uint8_t fill)
    : height_(height), width_(width), channels_(channels) {
  if (height < 0 || width < 0 || channels <= 0) {
    throw std::invalid_argument("raster dimensions must be non-negative");
  }
  samples_.assign(static_cast<std::size_t>(height) * width * channels, fill);
}

Raster::Raster(int height, int width, int channels,
               std::vector<std::uint8_t> samples)
    : height_(height),
      width_(width),
      channels_(channels),
      samples_(std::move(samples)) {
  if (height < 0 || width < 0 || channels <= 0) {
    throw std::invalid_argument("raster dimensions must be non-negative");
  }
  if (samples_.size() != static_cast<std::size_t>(height) * width * channels) {
    throw std::invalid_argument("raster sample count != height*width*channels");
  }
}

Raster Raster::crop(int y0, int x0, int h, int w) const {
  Raster out(h, w, channels_);
  for (int y = 0; y < h; ++y) {
    const int sy = y0 + y;
    if (sy < 0 || sy >= height_) continue;
    for (int x = 0; x < w; ++x) {
      const int sx = x0 + x;
      if (sx < 0 || sx >= width_) continue;
      for (int c = 0; c < channels_; ++c) out.at(y, x, c) = at(sy, sx, c);
    }
  }
  return out;
}

Raster pad_zero(const Raster& src, int pad) {
  if (pad < 0) throw std::invalid_argument("padding must be non-negative");
  return src.crop(-pad, -pad, src.height() + 2 * pad, src.width() + 2 * pad);
}

namespace {

struct Tap {
  int lo;
  int hi;
  double w_hi;
};

// Two-tap bilinear weights for one axis.
std::vector<Tap> bilinear_taps(int in, int out) {
  std::vector<Tap> taps(static_cast<std::size_t>(out));
  const double scale = static_cast<double>(in) / out;
  for (int i = 0; i < out; ++i) {
    double pos = (i + 0.5) * scale - 0.5;
    pos = std::clamp(pos, 0.0, static_cast<double>(in - 1));
    const int lo = static_cast<int>(std::floor(pos));
    const int hi = std::min(lo + 1, in - 1);
    taps[static_cast<std::size_t>(i)] = {lo, hi, pos - lo};
  }
  return taps;
}

}  // namespace

Raster resize_bilinear(const Raster& src, int out_height, int out_width) {
  if (out_height <= 0 || out_width <= 0 || src.empty()) {
    throw std::invalid_argument("resize needs a non-empty source and target");
  }
  const auto ty = bilinear_taps(src.height(), out_height);
  const auto tx = bilinear_taps(src.width(), out_width);
  Raster out(out_height, out_width, src.channels());
  for (int y = 0; y < out_height; ++y) {
    const Tap& a = ty[static_cast<std::size_t>(y)];
    for (int x = 0; x < out_width; ++x) {
      const Tap& b = tx[static_cast<std::size_t>(x)];
      for (int c = 0; c < src.channels(); ++c) {
        const double top = src.at(a.lo, b.lo, c) * (1.0 - b.w_hi) +
                           src.at(a.lo, b.hi, c) * b.w_hi;
        const double bottom = src.at(a.hi, b.lo, c) * (1.0 - b.w_hi) +
                              src.at(a.hi, b.hi, c) * b.w_hi;
        const double v = top * (1.0 - a.w_hi) + bottom * a.w_hi;
        out.at(y, x, c) =
            static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
      }
    }
  }
  return out;
}

namespace {

png_uint_32 format_for_channels(int channels) {
  switch (channels) {
    case 1: return PNG_FORMAT_GRAY;
    case 2: return PNG_FORMAT_GA;
    case 3: return PNG_FORMAT_RGB;
    case 4: return PNG_FORMAT_RGBA;
    default: throw ImageIoError("unsupported channel count for PNG");
  }
}

}  // namespace

Raster read_png(const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw ImageIoError("cannot read PNG " + path.string() + ": " + image.message);
  }
  int channels = PNG_IMAGE_SAMPLE_CHANNELS(image.format);
  // Colormapped and 16-bit inputs are decoded to their 8-bit direct equivalent.
  image.format = format_for_channels(channels);
  const int width = static_cast<int>(image.width);
  const int height = static_cast<int>(image.height);
  std::vector<std::uint8_t> samples(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, samples.data(), 0, nullptr)) {
    png_image_free(&image);
    throw ImageIoError("cannot decode PNG " + path.string() + ": " + image.message);
  }
  return Raster(height, width, channels, std::move(samples));
}

void write_png(const std::filesystem::path& path, const Raster& raster) {
  if (raster.empty()) throw ImageIoError("cannot write an empty raster");
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(raster.width());
  image.height = static_cast<png_uint_32>(raster.height());
  image.format = format_for_channels(raster.channels());
  if (!png_image_write_to_file(&image, path.c_str(), 0, raster.samples().data(), 0,
                               nullptr)) {
    throw ImageIoError("cannot write PNG " + path.string() + ": " + image.message);
  }
}

}  // namespace semba
