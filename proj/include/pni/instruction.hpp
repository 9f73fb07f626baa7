// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pni/geometry.hpp"

namespace pni {

struct Arrow {
  Point from;
  Point to;

  friend bool operator==(const Arrow&, const Arrow&) = default;
};

enum class ShapeKind { kPoint, kBox, kArrow };

std::string_view shape_kind_name(ShapeKind kind);

/// A user-drawn geometric argument: a star (point), a box, or an arrow.
struct Shape {
  std::variant<Point, BoundingBox, Arrow> geometry;

  ShapeKind kind() const { return static_cast<ShapeKind>(geometry.index()); }
  const Point* point() const { return std::get_if<Point>(&geometry); }
  const BoundingBox* box() const { return std::get_if<BoundingBox>(&geometry); }
  const Arrow* arrow() const { return std::get_if<Arrow>(&geometry); }

  friend bool operator==(const Shape&, const Shape&) = default;
};

struct TextSpan {
  std::string text;
  friend bool operator==(const TextSpan&, const TextSpan&) = default;
};

struct ShapeRef {
  std::string shape_id;
  friend bool operator==(const ShapeRef&, const ShapeRef&) = default;
};

using InstructionToken = std::variant<TextSpan, ShapeRef>;

/// Text interleaved with references into a table of drawn shapes.
struct MultimodalInstruction {
  std::vector<InstructionToken> tokens;
  std::map<std::string, Shape> shapes;

  /// Shapes in the order their refs appear in `tokens`.
  std::vector<const Shape*> referenced_shapes() const;
  bool has_refs() const;
  /// Concatenation of the text spans only, separated by spaces.
  std::string plain_text() const;

  friend bool operator==(const MultimodalInstruction&, const MultimodalInstruction&) = default;
};

/// Throws Error(kShapeValidation) for negative coordinates, an empty box, a
/// zero-length arrow, or a coordinate beyond kMaxCoordinate.
void check_shape(const Shape& shape);

/// Throws on an empty token list, an empty text span, a dangling ref
/// (kDanglingReference), a shape referenced twice, or an invalid shape.
void check_instruction(const MultimodalInstruction& instruction);

/// Canonical literal, e.g. `{x: 144, y: 132}`.
std::string serialize_shape(const Shape& shape);

/// Tokens joined in order with refs replaced by their literals. A single
/// space is inserted between neighbours unless one side already has one.
std::string serialize_instruction(const MultimodalInstruction& instruction);

/// Parses one shape literal; whitespace-insensitive, keys in any order.
/// Errors: kShapeSyntax (with offset) for malformed text, kShapeValidation for
/// negative, fractional or out-of-range values.
Shape parse_shape(std::string_view text);

/// Splits free text with inline shape literals into text and ref tokens.
/// Shapes get ids "s1", "s2", ... in order of appearance; text between
/// literals is trimmed and dropped when empty.
MultimodalInstruction parse_instruction_text(std::string_view text);

}  // namespace pni
