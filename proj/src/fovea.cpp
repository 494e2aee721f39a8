#include "semba/fovea.hpp"

#include <algorithm>
#include <string>

namespace semba {

void FoveaConfig::validate() const {
  if (levels < 1) throw std::invalid_argument("fovea needs at least one level");
  if (levels > 16) throw std::invalid_argument("fovea level count is unreasonably large");
  if (base_side < 2 || base_side % 2 != 0) {
    throw std::invalid_argument("fovea base side must be a positive even number, got " +
                                std::to_string(base_side));
  }
  if (image_height <= 0 || image_width <= 0) {
    throw std::invalid_argument("image dimensions must be positive");
  }
  if (base_side >= std::min(image_height, image_width)) {
    throw std::invalid_argument("fovea base side must be smaller than the image");
  }
}

int FoveaConfig::padding() const {
  return static_cast<int>(layer_side(levels, base_side) / 2);
}

void check_focal(Pixel focal, const FoveaConfig& cfg) {
  if (focal.x < 0 || focal.y < 0 || focal.x >= cfg.image_width ||
      focal.y >= cfg.image_height) {
    throw OutOfBoundsError("focal point (" + std::to_string(focal.x) + ", " +
                           std::to_string(focal.y) + ") is outside the " +
                           std::to_string(cfg.image_width) + "x" +
                           std::to_string(cfg.image_height) + " image");
  }
}

std::vector<LayerFrame> layer_frames(Pixel focal, const FoveaConfig& cfg) {
  cfg.validate();
  check_focal(focal, cfg);
  std::vector<LayerFrame> frames;
  frames.reserve(static_cast<std::size_t>(cfg.levels));
  for (int n = 1; n <= cfg.levels; ++n) {
    const int side = static_cast<int>(layer_side(n, cfg.base_side));
    const int half = side / 2;
    frames.push_back({n, side, {focal.x - half, focal.y - half},
                      {focal.x + half, focal.y + half}, 1 << (n - 1)});
  }
  return frames;
}

std::vector<Layer> build_pyramid(const Raster& image, Pixel focal,
                                 const FoveaConfig& cfg) {
  if (image.height() != cfg.image_height || image.width() != cfg.image_width) {
    throw std::invalid_argument("image dimensions do not match the fovea config");
  }
  const auto frames = layer_frames(focal, cfg);
  const int pad = cfg.padding();
  const Raster padded = pad_zero(image, pad);

  std::vector<Layer> layers;
  layers.reserve(frames.size());
  for (const auto& f : frames) {
    Raster crop = padded.crop(f.top_left.y + pad, f.top_left.x + pad, f.side, f.side);
    if (f.index == 1) {
      layers.push_back({f, std::move(crop)});
    } else {
      layers.push_back({f, resize_bilinear(crop, cfg.base_side, cfg.base_side)});
    }
  }
  return layers;
}

PointF to_image(PointF p, Pixel focal, int n, int base_side) {
  const double scale = static_cast<double>(1 << (n - 1));
  const double half = static_cast<double>(layer_side(n, base_side) / 2);
  return {focal.x - half + p.x * scale, focal.y - half + p.y * scale};
}

PointF to_layer(PointF p, Pixel focal, int n, int base_side) {
  const double scale = static_cast<double>(1 << (n - 1));
  const double half = static_cast<double>(layer_side(n, base_side) / 2);
  return {(p.x - focal.x + half) / scale, (p.y - focal.y + half) / scale};
}

RemappedBox remap_bbox(const BBox& layer_box, Pixel focal, int n, int base_side,
                       int image_height, int image_width) {
  if (n < 1) throw std::invalid_argument("layer index must be >= 1");
  const PointF lo = to_image({layer_box.x0, layer_box.y0}, focal, n, base_side);
  const PointF hi = to_image({layer_box.x1, layer_box.y1}, focal, n, base_side);
  RemappedBox out;
  out.unclipped = {lo.x, lo.y, hi.x, hi.y, Frame::image()};
  const BBox bounds{0.0, 0.0, static_cast<double>(image_width),
                    static_cast<double>(image_height), Frame::image()};
  out.box = intersect(out.unclipped, bounds);
  out.clipped = !(out.box == out.unclipped);
  return out;
}

PixelCost pixel_cost(const FoveaConfig& cfg) {
  cfg.validate();
  PixelCost c;
  c.pixels = static_cast<std::int64_t>(cfg.levels) * cfg.base_side * cfg.base_side;
  c.percent = 100.0 * static_cast<double>(c.pixels) /
              (static_cast<double>(cfg.image_height) * cfg.image_width);
  return c;
}

}  // namespace semba
