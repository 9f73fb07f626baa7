// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>

namespace pni {

/// Parsers reject any coordinate or extent whose magnitude exceeds this.
/// Keeps every area below 2^42 so ratio comparisons fit in 128 bits.
inline constexpr std::int64_t kMaxCoordinate = std::int64_t{1} << 20;

/// Pixel position; origin is the canvas top-left, y grows downward.
struct Point {
  std::int64_t x = 0;
  std::int64_t y = 0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Axis-aligned box given by its top-left corner and extent. A box may sit
/// partly off-canvas (negative origin); width and height are always >= 1.
struct BoundingBox {
  std::int64_t x = 0;
  std::int64_t y = 0;
  std::int64_t width = 1;
  std::int64_t height = 1;

  std::int64_t right() const { return x + width; }
  std::int64_t bottom() const { return y + height; }
  std::int64_t area() const { return width * height; }
  /// Integer center: top-left plus floor(size / 2).
  Point center() const { return {x + width / 2, y + height / 2}; }
  bool valid() const { return width >= 1 && height >= 1; }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct Canvas {
  static constexpr std::int64_t kMinSide = 16;
  static constexpr std::int64_t kDefaultSide = 512;

  std::int64_t width = kDefaultSide;
  std::int64_t height = kDefaultSide;

  bool valid() const { return width >= kMinSide && height >= kMinSide; }
  bool contains(const Point& p) const {
    return p.x >= 0 && p.y >= 0 && p.x < width && p.y < height;
  }
  bool contains(const BoundingBox& b) const {
    return b.x >= 0 && b.y >= 0 && b.right() <= width && b.bottom() <= height;
  }

  friend bool operator==(const Canvas&, const Canvas&) = default;
};

/// Exact non-negative rational, always stored in lowest terms with den > 0.
class Ratio {
 public:
  constexpr Ratio() = default;
  Ratio(std::int64_t num, std::int64_t den);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend bool operator==(const Ratio&, const Ratio&) = default;
  friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Area of the overlap of two boxes (0 when disjoint or merely touching).
std::int64_t intersection_area(const BoundingBox& a, const BoundingBox& b);

/// Intersection over union. Symmetric, in [0, 1].
Ratio iou(const BoundingBox& a, const BoundingBox& b);

/// Fraction of `object` covered by `selector`.
Ratio coverage(const BoundingBox& selector, const BoundingBox& object);

/// Minimal translation of `box` that places it fully inside `canvas`.
/// Throws Error(kUnplaceableBox) when the box is larger than the canvas.
BoundingBox clamp_to_canvas(const BoundingBox& box, const Canvas& canvas);

/// Centers `box` on `target`, then clamps into the canvas. Size is preserved.
/// Throws Error(kPointOutsideCanvas) for a target off the canvas and
/// Error(kUnplaceableBox) when the box cannot fit.
BoundingBox move_center_to(const BoundingBox& box, const Point& target, const Canvas& canvas);

/// Same-size box whose center sits at `target` (no clamping).
BoundingBox centered_at(const BoundingBox& box, const Point& target);

}  // namespace pni
