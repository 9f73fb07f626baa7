// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#include "pni/geometry.hpp"

#include <algorithm>
#include <numeric>

#include "pni/error.hpp"

namespace pni {

namespace {
__extension__ typedef __int128 Int128;
}  // namespace

Ratio::Ratio(std::int64_t num, std::int64_t den) {
  if (den <= 0 || num < 0) {
    throw Error(ErrorCode::kInvalidArgument, "ratio requires num >= 0 and den > 0");
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) {
  const Int128 lhs = static_cast<Int128>(a.num_) * b.den_;
  const Int128 rhs = static_cast<Int128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::int64_t intersection_area(const BoundingBox& a, const BoundingBox& b) {
  const std::int64_t w = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const std::int64_t h = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  if (w <= 0 || h <= 0) return 0;
  return w * h;
}

Ratio iou(const BoundingBox& a, const BoundingBox& b) {
  const std::int64_t inter = intersection_area(a, b);
  return Ratio(inter, a.area() + b.area() - inter);
}

Ratio coverage(const BoundingBox& selector, const BoundingBox& object) {
  return Ratio(intersection_area(selector, object), object.area());
}

BoundingBox clamp_to_canvas(const BoundingBox& box, const Canvas& canvas) {
  if (box.width > canvas.width || box.height > canvas.height) {
    throw Error(ErrorCode::kUnplaceableBox, "unplaceable box");
  }
  BoundingBox out = box;
  out.x = std::clamp(box.x, std::int64_t{0}, canvas.width - box.width);
  out.y = std::clamp(box.y, std::int64_t{0}, canvas.height - box.height);
  return out;
}

BoundingBox centered_at(const BoundingBox& box, const Point& target) {
  return {target.x - box.width / 2, target.y - box.height / 2, box.width, box.height};
}

BoundingBox move_center_to(const BoundingBox& box, const Point& target, const Canvas& canvas) {
  if (box.width > canvas.width || box.height > canvas.height) {
    throw Error(ErrorCode::kUnplaceableBox, "unplaceable box");
  }
  if (!canvas.contains(target)) {
    throw Error(ErrorCode::kPointOutsideCanvas, "target point outside canvas");
  }
  return clamp_to_canvas(centered_at(box, target), canvas);
}

}  // namespace pni
