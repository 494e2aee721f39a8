#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>

namespace semba {

/// Integer pixel location in the image frame (x = column, y = row).
struct Pixel {
  int x = 0;
  int y = 0;
  friend constexpr auto operator<=>(const Pixel&, const Pixel&) = default;
};

/// Grid cell index (x = column, y = row).
struct Cell {
  int x = 0;
  int y = 0;
  friend constexpr auto operator<=>(const Cell&, const Cell&) = default;
};

/// Coordinate frame a box is expressed in. Layer frames are l1 x l1 rasters of
/// pyramid level `level` (1-based); level 0 denotes the image frame.
struct Frame {
  int level = 0;
  static constexpr Frame image() { return {0}; }
  static constexpr Frame layer(int n) { return {n}; }
  constexpr bool is_image() const { return level == 0; }
  friend constexpr bool operator==(const Frame&, const Frame&) = default;
};

/// Axis-aligned box with real-valued corners; (x0, y0) top-left, (x1, y1)
/// bottom-right.
struct BBox {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;
  Frame frame = Frame::image();

  constexpr double width() const { return x1 - x0; }
  constexpr double height() const { return y1 - y0; }
  constexpr double area() const {
    return width() > 0.0 && height() > 0.0 ? width() * height() : 0.0;
  }
  constexpr bool valid() const { return x0 <= x1 && y0 <= y1; }

  /// Inclusive point containment.
  constexpr bool contains(double x, double y) const {
    return x >= x0 && x <= x1 && y >= y0 && y <= y1;
  }

  friend constexpr bool operator==(const BBox&, const BBox&) = default;
};

/// Intersection of two boxes; empty intersections come back with zero area.
constexpr BBox intersect(const BBox& a, const BBox& b) {
  BBox r{std::max(a.x0, b.x0), std::max(a.y0, b.y0), std::min(a.x1, b.x1),
         std::min(a.y1, b.y1), a.frame};
  if (r.x1 < r.x0) r.x1 = r.x0;
  if (r.y1 < r.y0) r.y1 = r.y0;
  return r;
}

constexpr double intersection_area(const BBox& a, const BBox& b) {
  return intersect(a, b).area();
}

}  // namespace semba
