// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#include "pni/layout_text.hpp"

#include <optional>
#include <vector>

#include <fmt/format.h>

#include "pni/error.hpp"
#include "pni/wire.hpp"
#include "text_util.hpp"

namespace pni {

namespace {

std::string quote(const std::string& s) {
  return Json(s).dump(-1, ' ', false, Json::error_handler_t::replace);
}

[[noreturn]] void schema_fail(const std::string& path, std::string_view what,
                              std::string detail) {
  throw Error(ErrorCode::kSchema, fmt::format("{}: {}", path, what), std::move(detail));
}

const Json& require(const Json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_fail(path + "." + key, "missing key", "missing-key");
  return *it;
}

std::int64_t integer(const Json& v, const std::string& path) {
  if (!v.is_number_integer()) schema_fail(path, "expected an integer", "wrong-type");
  if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(kMaxCoordinate)) {
    schema_fail(path, "integer out of range", "out-of-range");
  }
  const auto n = v.get<std::int64_t>();
  if (n > kMaxCoordinate || n < -kMaxCoordinate) {
    schema_fail(path, "integer out of range", "out-of-range");
  }
  return n;
}

const Json& object(const Json& v, const std::string& path) {
  if (!v.is_object()) schema_fail(path, "expected an object", "wrong-type");
  return v;
}

std::string string(const Json& v, const std::string& path) {
  if (!v.is_string()) schema_fail(path, "expected a string", "wrong-type");
  return v.get<std::string>();
}

}  // namespace

Json layout_to_json(const Layout& layout) {
  Json objects = Json::array();
  for (const auto& o : layout.objects) {
    objects.push_back(Json{{"id", o.id},
                           {"caption", o.caption},
                           {"box",
                            {{"x", o.box.x},
                             {"y", o.box.y},
                             {"width", o.box.width},
                             {"height", o.box.height}}}});
  }
  return Json{{"canvas", {{"width", layout.canvas.width}, {"height", layout.canvas.height}}},
              {"background", layout.background},
              {"objects", std::move(objects)}};
}

Layout layout_from_json(const Json& json, bool check_invariants) {
  const std::string root = "$";
  object(json, root);
  Layout layout;

  const Json& canvas = object(require(json, "canvas", root), "$.canvas");
  layout.canvas.width = integer(require(canvas, "width", "$.canvas"), "$.canvas.width");
  layout.canvas.height = integer(require(canvas, "height", "$.canvas"), "$.canvas.height");
  layout.background = string(require(json, "background", root), "$.background");

  const Json& objects = require(json, "objects", root);
  if (!objects.is_array()) schema_fail("$.objects", "expected an array", "wrong-type");
  layout.objects.reserve(objects.size());
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const std::string path = fmt::format("$.objects[{}]", i);
    const Json& item = object(objects[i], path);
    SceneObject o;
    o.id = integer(require(item, "id", path), path + ".id");
    o.caption = string(require(item, "caption", path), path + ".caption");
    const std::string box_path = path + ".box";
    const Json& box = object(require(item, "box", path), box_path);
    o.box.x = integer(require(box, "x", box_path), box_path + ".x");
    o.box.y = integer(require(box, "y", box_path), box_path + ".y");
    o.box.width = integer(require(box, "width", box_path), box_path + ".width");
    o.box.height = integer(require(box, "height", box_path), box_path + ".height");
    layout.objects.push_back(std::move(o));
  }

  if (check_invariants) check_layout_invariants(layout);
  return layout;
}

std::string serialize_layout(const Layout& layout) {
  std::string out = "{\n";
  out += fmt::format("  \"canvas\": {{\"width\": {}, \"height\": {}}},\n", layout.canvas.width,
                     layout.canvas.height);
  out += fmt::format("  \"background\": {},\n", quote(layout.background));
  if (layout.objects.empty()) {
    out += "  \"objects\": []\n}";
    return out;
  }
  out += "  \"objects\": [\n";
  for (std::size_t i = 0; i < layout.objects.size(); ++i) {
    const auto& o = layout.objects[i];
    out += fmt::format(
        "    {{\"id\": {}, \"caption\": {}, \"box\": {{\"x\": {}, \"y\": {}, \"width\": {}, "
        "\"height\": {}}}}}",
        o.id, quote(o.caption), o.box.x, o.box.y, o.box.width, o.box.height);
    out += i + 1 < layout.objects.size() ? ",\n" : "\n";
  }
  out += "  ]\n}";
  return out;
}

Layout parse_layout_unchecked(std::string_view text) {
  Json json;
  try {
    json = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    const std::size_t at = e.byte == 0 ? 0 : e.byte - 1;
    throw Error(ErrorCode::kJsonSyntax, fmt::format("invalid JSON at offset {}", at),
                "json-syntax", at);
  } catch (const Json::exception& e) {
    // Number overflow surfaces as out_of_range rather than parse_error.
    throw Error(ErrorCode::kJsonSyntax, fmt::format("invalid JSON: {}", e.what()), "json-syntax");
  }
  return layout_from_json(json, /*check_invariants=*/false);
}

Layout parse_layout(std::string_view text) {
  Layout layout = parse_layout_unchecked(text);
  check_layout_invariants(layout);
  return layout;
}

namespace {

std::optional<std::size_t> last_sentinel_end(std::string_view text) {
  std::optional<std::size_t> found;
  std::size_t line_start = 0;
  while (line_start <= text.size()) {
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string_view::npos) line_end = text.size();
    std::size_t p = line_start;
    while (p < line_end && detail::is_space(text[p])) ++p;
    if (text.substr(p, line_end - p).starts_with(kOutputLayoutSentinel)) {
      found = p + kOutputLayoutSentinel.size();
    }
    line_start = line_end + 1;
  }
  return found;
}

// Matches braces with a stack, skipping string literals inside open braces,
// and returns the outermost matched pair that closes last.
std::optional<std::string_view> last_balanced_object(std::string_view text) {
  std::vector<std::size_t> open;
  std::optional<std::pair<std::size_t, std::size_t>> best;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"' && !open.empty()) {
      in_string = true;
    } else if (c == '{') {
      open.push_back(i);
    } else if (c == '}' && !open.empty()) {
      const std::size_t start = open.back();
      open.pop_back();
      best = {start, i};
    }
  }
  if (!best) return std::nullopt;
  // Each match closes later than every pair nested inside it, so the final
  // match recorded is the outermost pair with the greatest close index.
  return text.substr(best->first, best->second - best->first + 1);
}

}  // namespace

std::string extract_layout_block(std::string_view completion) {
  if (auto end = last_sentinel_end(completion)) {
    std::string_view rest = detail::trim(completion.substr(*end));
    if (rest.empty()) {
      throw Error(ErrorCode::kNoLayoutFound, "no layout found in completion");
    }
    return std::string(rest);
  }
  if (auto block = last_balanced_object(completion)) return std::string(*block);
  throw Error(ErrorCode::kNoLayoutFound, "no layout found in completion");
}

}  // namespace pni
