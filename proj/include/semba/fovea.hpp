#pragma once

// Multi-scale fovea: concentric square layers of side l1 * 2^(n-1) around a
// focal point, each resampled to l1 x l1.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "semba/geometry.hpp"
#include "semba/raster.hpp"

namespace semba {

class OutOfBoundsError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

struct FoveaConfig {
  int levels = 4;
  int base_side = 160;
  int image_height = 1050;
  int image_width = 1680;

  /// Throws std::invalid_argument unless levels >= 1, base_side is a positive
  /// even number, and base_side < min(image_height, image_width).
  void validate() const;

  /// Zero padding applied on each side of the image, l_N / 2.
  int padding() const;
};

/// Placement of one pyramid level. Corners are in the image frame and may be
/// negative or exceed the image when the layer reaches into the padding.
struct LayerFrame {
  int index = 1;  // n, 1-based
  int side = 0;   // l_n
  Pixel top_left;
  Pixel bottom_right;
  int scale = 1;  // 2^(n-1)

  BBox region() const {
    return {static_cast<double>(top_left.x), static_cast<double>(top_left.y),
            static_cast<double>(bottom_right.x), static_cast<double>(bottom_right.y),
            Frame::image()};
  }
  friend bool operator==(const LayerFrame&, const LayerFrame&) = default;
};

struct Layer {
  LayerFrame frame;
  Raster raster;
};

/// l_n = 2^(n-1) * l1.
constexpr std::int64_t layer_side(int n, std::int64_t base_side) {
  return base_side << (n - 1);
}

/// Throws OutOfBoundsError when `focal` lies outside the image.
void check_focal(Pixel focal, const FoveaConfig& cfg);

/// Layer placements for a focal point, innermost first. Geometry only.
std::vector<LayerFrame> layer_frames(Pixel focal, const FoveaConfig& cfg);

/// Builds the N-level pyramid. L1 is an exact crop; outer levels are bilinear
/// downsampled to l1 x l1. The image dimensions must match cfg.
std::vector<Layer> build_pyramid(const Raster& image, Pixel focal,
                                 const FoveaConfig& cfg);

struct RemappedBox {
  BBox box;       // image frame, clipped to [0, width] x [0, height]
  BBox unclipped; // image frame before clipping
  bool clipped = false;
};

/// Maps a layer-frame box of level n into the image frame:
/// p = f - l_n/2 + p' * 2^(n-1), then clips to the image.
RemappedBox remap_bbox(const BBox& layer_box, Pixel focal, int n, int base_side,
                       int image_height, int image_width);

/// Inverse of the remapping for a single point (no clipping).
struct PointF {
  double x = 0.0;
  double y = 0.0;
};
PointF to_layer(PointF image_point, Pixel focal, int n, int base_side);
PointF to_image(PointF layer_point, Pixel focal, int n, int base_side);

struct PixelCost {
  std::int64_t pixels = 0;  // N * l1^2
  double percent = 0.0;     // of image_height * image_width
};

PixelCost pixel_cost(const FoveaConfig& cfg);

}  // namespace semba
