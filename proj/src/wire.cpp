// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#include "pni/wire.hpp"

#include <fmt/format.h>

namespace pni {

namespace {

[[noreturn]] void bad(std::string_view what) {
  throw Error(ErrorCode::kSchema, fmt::format("instruction: {}", what), "wrong-type");
}

std::int64_t coord(const Json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) bad(fmt::format("shape is missing '{}'", key));
  if (!it->is_number()) bad(fmt::format("'{}' must be a number", key));
  if (!it->is_number_integer()) {
    throw Error(ErrorCode::kShapeValidation, fmt::format("fractional coordinate '{}'", key));
  }
  if (it->is_number_unsigned()) {
    const auto u = it->get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(kMaxCoordinate)) {
      throw Error(ErrorCode::kShapeValidation, fmt::format("'{}' out of range", key));
    }
    return static_cast<std::int64_t>(u);
  }
  return it->get<std::int64_t>();
}

Point point_from(const Json& obj) {
  if (!obj.is_object()) bad("point must be an object");
  return {coord(obj, "x"), coord(obj, "y")};
}

}  // namespace

Json shape_to_json(const Shape& shape) {
  if (const auto* p = shape.point()) return Json{{"kind", "point"}, {"x", p->x}, {"y", p->y}};
  if (const auto* b = shape.box()) {
    return Json{{"kind", "box"}, {"x", b->x}, {"y", b->y}, {"width", b->width}, {"height", b->height}};
  }
  const auto& a = *shape.arrow();
  return Json{{"kind", "arrow"},
              {"from", {{"x", a.from.x}, {"y", a.from.y}}},
              {"to", {{"x", a.to.x}, {"y", a.to.y}}}};
}

Shape shape_from_json(const Json& json) {
  if (!json.is_object()) bad("shape must be an object");
  auto kind = json.find("kind");
  if (kind == json.end() || !kind->is_string()) bad("shape needs a string 'kind'");
  const auto k = kind->get<std::string>();
  Shape shape;
  if (k == "point") {
    shape.geometry = point_from(json);
  } else if (k == "box") {
    shape.geometry = BoundingBox{coord(json, "x"), coord(json, "y"), coord(json, "width"),
                                 coord(json, "height")};
  } else if (k == "arrow") {
    auto from = json.find("from");
    auto to = json.find("to");
    if (from == json.end() || to == json.end()) bad("arrow needs 'from' and 'to'");
    shape.geometry = Arrow{point_from(*from), point_from(*to)};
  } else {
    bad(fmt::format("unknown shape kind '{}'", k));
  }
  check_shape(shape);
  return shape;
}

Json instruction_to_json(const MultimodalInstruction& instruction) {
  Json tokens = Json::array();
  for (const auto& tok : instruction.tokens) {
    if (const auto* span = std::get_if<TextSpan>(&tok)) {
      tokens.push_back(Json{{"text", span->text}});
    } else {
      tokens.push_back(Json{{"ref", std::get<ShapeRef>(tok).shape_id}});
    }
  }
  Json shapes = Json::object();
  for (const auto& [id, shape] : instruction.shapes) shapes[id] = shape_to_json(shape);
  return Json{{"tokens", std::move(tokens)}, {"shapes", std::move(shapes)}};
}

MultimodalInstruction instruction_from_json(const Json& json) {
  if (!json.is_object()) bad("body must be an object");
  auto tokens = json.find("tokens");
  if (tokens == json.end() || !tokens->is_array()) bad("'tokens' must be an array");
  MultimodalInstruction out;
  for (const auto& tok : *tokens) {
    if (!tok.is_object()) bad("token must be an object");
    auto text = tok.find("text");
    auto ref = tok.find("ref");
    if ((text == tok.end()) == (ref == tok.end())) bad("token needs exactly one of 'text' or 'ref'");
    if (text != tok.end()) {
      if (!text->is_string()) bad("'text' must be a string");
      out.tokens.emplace_back(TextSpan{text->get<std::string>()});
    } else {
      if (!ref->is_string()) bad("'ref' must be a string");
      out.tokens.emplace_back(ShapeRef{ref->get<std::string>()});
    }
  }
  if (auto shapes = json.find("shapes"); shapes != json.end()) {
    if (!shapes->is_object()) bad("'shapes' must be an object");
    for (const auto& [id, shape] : shapes->items()) {
      out.shapes.emplace(id, shape_from_json(shape));
    }
  }
  check_instruction(out);
  return out;
}

Json error_to_json(const Error& error) {
  Json body{{"code", std::string(error.code_name())}, {"message", error.what()}};
  if (!error.detail().empty()) body["detail"] = error.detail();
  if (error.offset()) body["offset"] = *error.offset();
  return Json{{"error", std::move(body)}};
}

Json report_to_json(const ValidationReport& report) {
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    checks.push_back(Json{{"rule_id", c.rule_id}, {"passed", c.passed}, {"detail", c.detail}});
  }
  return Json{{"ok", report.ok}, {"checks", std::move(checks)}};
}

ValidationReport report_from_json(const Json& json) {
  if (!json.is_object()) bad("report must be an object");
  auto checks = json.find("checks");
  if (checks == json.end() || !checks->is_array()) bad("'checks' must be an array");
  ValidationReport out;
  for (const auto& c : *checks) {
    if (!c.is_object() || !c.contains("rule_id") || !c["rule_id"].is_string() ||
        !c.contains("passed") || !c["passed"].is_boolean()) {
      bad("check needs 'rule_id' and 'passed'");
    }
    std::string detail;
    if (auto d = c.find("detail"); d != c.end() && d->is_string()) detail = d->get<std::string>();
    out.add(c["rule_id"].get<std::string>(), c["passed"].get<bool>(), std::move(detail));
  }
  return out;
}

}  // namespace pni
