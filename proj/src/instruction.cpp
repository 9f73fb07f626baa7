// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#include "pni/instruction.hpp"

#include <cctype>
#include <optional>
#include <set>

#include <fmt/format.h>

#include "pni/error.hpp"
#include "text_util.hpp"

namespace pni {

std::string_view shape_kind_name(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::kPoint: return "point";
    case ShapeKind::kBox: return "box";
    case ShapeKind::kArrow: return "arrow";
  }
  return "unknown";
}

std::vector<const Shape*> MultimodalInstruction::referenced_shapes() const {
  std::vector<const Shape*> out;
  for (const auto& tok : tokens) {
    if (const auto* ref = std::get_if<ShapeRef>(&tok)) {
      auto it = shapes.find(ref->shape_id);
      if (it != shapes.end()) out.push_back(&it->second);
    }
  }
  return out;
}

bool MultimodalInstruction::has_refs() const {
  for (const auto& tok : tokens) {
    if (std::holds_alternative<ShapeRef>(tok)) return true;
  }
  return false;
}

std::string MultimodalInstruction::plain_text() const {
  std::string out;
  for (const auto& tok : tokens) {
    if (const auto* span = std::get_if<TextSpan>(&tok)) {
      if (!out.empty()) out += ' ';
      out += span->text;
    }
  }
  return out;
}

namespace {

void check_coordinate(std::int64_t v, std::string_view what) {
  if (v < 0) {
    throw Error(ErrorCode::kShapeValidation, fmt::format("negative {} {}", what, v));
  }
  if (v > kMaxCoordinate) {
    throw Error(ErrorCode::kShapeValidation, fmt::format("{} {} out of range", what, v));
  }
}

void check_point(const Point& p) {
  check_coordinate(p.x, "x");
  check_coordinate(p.y, "y");
}

}  // namespace

void check_shape(const Shape& shape) {
  if (const auto* p = shape.point()) {
    check_point(*p);
  } else if (const auto* b = shape.box()) {
    check_coordinate(b->x, "x");
    check_coordinate(b->y, "y");
    check_coordinate(b->width, "width");
    check_coordinate(b->height, "height");
    if (!b->valid()) {
      throw Error(ErrorCode::kShapeValidation, "box width and height must be >= 1");
    }
  } else if (const auto* a = shape.arrow()) {
    check_point(a->from);
    check_point(a->to);
    if (a->from == a->to) {
      throw Error(ErrorCode::kShapeValidation, "arrow must have distinct endpoints");
    }
  }
}

void check_instruction(const MultimodalInstruction& instruction) {
  if (instruction.tokens.empty()) {
    throw Error(ErrorCode::kInvalidInstruction, "instruction has no tokens");
  }
  std::set<std::string> used;
  for (const auto& tok : instruction.tokens) {
    if (const auto* span = std::get_if<TextSpan>(&tok)) {
      if (span->text.empty()) {
        throw Error(ErrorCode::kInvalidInstruction, "empty text span");
      }
      continue;
    }
    const auto& id = std::get<ShapeRef>(tok).shape_id;
    auto it = instruction.shapes.find(id);
    if (it == instruction.shapes.end()) {
      throw Error(ErrorCode::kDanglingReference,
                  fmt::format("dangling shape reference '{}'", id));
    }
    if (!used.insert(id).second) {
      throw Error(ErrorCode::kInvalidInstruction,
                  fmt::format("shape '{}' referenced more than once", id));
    }
    check_shape(it->second);
  }
}

namespace {

std::string point_literal(const Point& p) { return fmt::format("{{x: {}, y: {}}}", p.x, p.y); }

}  // namespace

std::string serialize_shape(const Shape& shape) {
  if (const auto* p = shape.point()) return point_literal(*p);
  if (const auto* b = shape.box()) {
    return fmt::format("{{x: {}, y: {}, width: {}, height: {}}}", b->x, b->y, b->width,
                       b->height);
  }
  const auto& a = *shape.arrow();
  return fmt::format("{{from: {}, to: {}}}", point_literal(a.from), point_literal(a.to));
}

std::string serialize_instruction(const MultimodalInstruction& instruction) {
  std::string out;
  for (const auto& tok : instruction.tokens) {
    std::string piece;
    if (const auto* span = std::get_if<TextSpan>(&tok)) {
      piece = span->text;
    } else {
      const auto& id = std::get<ShapeRef>(tok).shape_id;
      auto it = instruction.shapes.find(id);
      if (it == instruction.shapes.end()) {
        throw Error(ErrorCode::kDanglingReference,
                    fmt::format("dangling shape reference '{}'", id));
      }
      piece = serialize_shape(it->second);
    }
    if (!out.empty() && !piece.empty() && !detail::is_space(out.back()) &&
        !detail::is_space(piece.front())) {
      out += ' ';
    }
    out += piece;
  }
  return out;
}

namespace {

// Recursive-descent reader for shape literals. Nesting is at most two deep
// (an arrow holding two points).
class ShapeReader {
 public:
  explicit ShapeReader(std::string_view text) : text_(text) {}

  Shape read_top() {
    skip_ws();
    Shape shape = read_object(/*nested=*/false);
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing characters");
    check_shape(shape);
    return shape;
  }

 private:
  struct Member {
    std::size_t offset;
    std::optional<std::int64_t> number;
    std::optional<Point> point;
  };

  [[noreturn]] void fail(std::string_view what) const { fail_at(pos_, what); }

  [[noreturn]] void fail_at(std::size_t at, std::string_view what) const {
    throw Error(ErrorCode::kShapeSyntax, fmt::format("{} at offset {}", what, at), {}, at);
  }

  void skip_ws() {
    while (pos_ < text_.size() && detail::is_space(text_[pos_])) ++pos_;
  }

  void expect(char c) {
    if (pos_ >= text_.size() || text_[pos_] != c) fail(fmt::format("expected '{}'", c));
    ++pos_;
  }

  std::string read_key() {
    const bool quoted = pos_ < text_.size() && text_[pos_] == '"';
    if (quoted) ++pos_;
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    if (pos_ == start) fail("expected key");
    std::string key(text_.substr(start, pos_ - start));
    if (quoted) expect('"');
    return key;
  }

  std::int64_t read_number() {
    const std::size_t start = pos_;
    bool negative = false;
    if (pos_ < text_.size() && text_[pos_] == '-') {
      negative = true;
      ++pos_;
    }
    const std::size_t digits_start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == digits_start) fail_at(start, "expected number");
    bool fractional = false;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      const std::size_t frac_start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (pos_ == frac_start) fail_at(start, "malformed number");
      fractional = true;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      fail_at(start, "exponent notation not allowed");
    }
    if (fractional) {
      throw Error(ErrorCode::kShapeValidation,
                  fmt::format("fractional coordinate at offset {}", start), {}, start);
    }
    if (negative) {
      throw Error(ErrorCode::kShapeValidation,
                  fmt::format("negative coordinate at offset {}", start), {}, start);
    }
    const std::string_view digits = text_.substr(digits_start, pos_ - digits_start);
    if (digits.size() > 12) {
      throw Error(ErrorCode::kShapeValidation,
                  fmt::format("coordinate out of range at offset {}", start), {}, start);
    }
    std::int64_t value = 0;
    for (char c : digits) value = value * 10 + (c - '0');
    if (value > kMaxCoordinate) {
      throw Error(ErrorCode::kShapeValidation,
                  fmt::format("coordinate out of range at offset {}", start), {}, start);
    }
    return value;
  }

  Shape read_object(bool nested) {
    const std::size_t open = pos_;
    expect('{');
    std::map<std::string, Member> members;
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '}') fail("empty shape literal");
    while (true) {
      skip_ws();
      const std::size_t key_at = pos_;
      std::string key = read_key();
      skip_ws();
      expect(':');
      skip_ws();
      Member m{key_at, std::nullopt, std::nullopt};
      if (pos_ < text_.size() && text_[pos_] == '{') {
        if (nested) fail("shape literal nested too deeply");
        const std::size_t inner_at = pos_;
        Shape inner = read_object(/*nested=*/true);
        if (!inner.point()) fail_at(inner_at, "arrow endpoints must be points");
        m.point = *inner.point();
      } else {
        m.number = read_number();
      }
      if (!members.emplace(key, m).second) fail_at(key_at, fmt::format("duplicate key '{}'", key));
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == ',') {
        ++pos_;
        continue;
      }
      expect('}');
      break;
    }
    return build(members, open);
  }

  Shape build(const std::map<std::string, Member>& members, std::size_t open) const {
    auto number = [&](const char* key) {
      const Member& m = members.at(key);
      if (!m.number) fail_at(m.offset, fmt::format("'{}' must be a number", key));
      return *m.number;
    };
    auto point = [&](const char* key) {
      const Member& m = members.at(key);
      if (!m.point) fail_at(m.offset, fmt::format("'{}' must be a point literal", key));
      return *m.point;
    };
    auto has_exactly = [&](std::initializer_list<const char*> keys) {
      if (members.size() != keys.size()) return false;
      for (const char* k : keys) {
        if (!members.count(k)) return false;
      }
      return true;
    };

    if (has_exactly({"x", "y"})) return Shape{Point{number("x"), number("y")}};
    if (has_exactly({"x", "y", "width", "height"})) {
      return Shape{BoundingBox{number("x"), number("y"), number("width"), number("height")}};
    }
    if (has_exactly({"from", "to"})) return Shape{Arrow{point("from"), point("to")}};

    for (const auto& [key, m] : members) {
      if (key != "x" && key != "y" && key != "width" && key != "height" && key != "from" &&
          key != "to") {
        fail_at(m.offset, fmt::format("unknown key '{}'", key));
      }
    }
    fail_at(open, "key set matches no shape kind");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Shape parse_shape(std::string_view text) { return ShapeReader(text).read_top(); }

MultimodalInstruction parse_instruction_text(std::string_view text) {
  MultimodalInstruction out;
  std::size_t pos = 0;
  int next_shape = 1;

  auto push_text = [&](std::string_view span) {
    std::string_view trimmed = detail::trim(span);
    if (!trimmed.empty()) out.tokens.emplace_back(TextSpan{std::string(trimmed)});
  };

  while (pos < text.size()) {
    const std::size_t open = text.find_first_of("{}", pos);
    if (open == std::string_view::npos) {
      push_text(text.substr(pos));
      break;
    }
    if (text[open] == '}') {
      throw Error(ErrorCode::kShapeSyntax, fmt::format("unmatched '}}' at offset {}", open), {},
                  open);
    }
    push_text(text.substr(pos, open - pos));

    int depth = 0;
    std::size_t close = std::string_view::npos;
    for (std::size_t i = open; i < text.size(); ++i) {
      if (text[i] == '{') ++depth;
      if (text[i] == '}' && --depth == 0) {
        close = i;
        break;
      }
    }
    if (close == std::string_view::npos) {
      throw Error(ErrorCode::kShapeSyntax,
                  fmt::format("unterminated shape literal at offset {}", open), {}, open);
    }

    Shape shape;
    try {
      shape = parse_shape(text.substr(open, close - open + 1));
    } catch (const Error& e) {
      if (!e.offset()) throw;
      const std::size_t at = open + *e.offset();
      std::string message = e.what();
      if (auto cut = message.rfind(" at offset "); cut != std::string::npos) {
        message.resize(cut);
      }
      throw Error(e.code(), fmt::format("{} at offset {}", message, at), e.detail(), at);
    }
    std::string id = fmt::format("s{}", next_shape++);
    out.tokens.emplace_back(ShapeRef{id});
    out.shapes.emplace(std::move(id), std::move(shape));
    pos = close + 1;
  }

  if (out.tokens.empty()) {
    throw Error(ErrorCode::kInvalidInstruction, "instruction is empty");
  }
  return out;
}

}  // namespace pni
