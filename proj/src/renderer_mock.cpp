// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#include "pni/renderer.hpp"

#include <fmt/format.h>

#include "pni/error.hpp"
#include "pni/layout_text.hpp"

namespace pni {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default:
        // XML 1.0 forbids most control characters.
        if (static_cast<unsigned char>(c) < 0x20 && c != '\t' && c != '\n' && c != '\r') {
          out += ' ';
        } else {
          out += c;
        }
    }
  }
  return out;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = kFnvOffset;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= kFnvPrime;
  }
  return h;
}

int caption_hue(std::string_view caption) { return static_cast<int>(fnv1a64(caption) % 360); }

std::string layout_hash(const Layout& layout) {
  return fmt::format("{:016x}", fnv1a64(serialize_layout(layout)));
}

std::string render_svg(const Layout& layout) {
  const auto w = layout.canvas.width, h = layout.canvas.height;
  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\">\n",
      w, h);
  out += fmt::format(
      "  <rect data-role=\"background\" x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" "
      "fill=\"hsl({},40%,85%)\"/>\n",
      w, h, caption_hue(layout.background));
  for (const auto& o : layout.objects) {
    const int hue = caption_hue(o.caption);
    out += fmt::format(
        "  <g data-id=\"{0}\">\n"
        "    <rect x=\"{1}\" y=\"{2}\" width=\"{3}\" height=\"{4}\" fill=\"hsl({5},70%,60%)\" "
        "fill-opacity=\"0.3\" stroke=\"hsl({5},70%,60%)\" stroke-width=\"2\"/>\n"
        "    <text x=\"{1}\" y=\"{2}\" dominant-baseline=\"hanging\" font-family=\"sans-serif\" "
        "font-size=\"14\">{6}</text>\n"
        "  </g>\n",
        o.id, o.box.x, o.box.y, o.box.width, o.box.height, hue, xml_escape(o.caption));
  }
  out += "</svg>\n";
  return out;
}

RenderArtifact render_mock(const Layout& layout) {
  return {render_svg(layout), std::string(kMediaSvg), "mock", layout_hash(layout)};
}

std::string_view renderer_kind_name(RendererKind kind) {
  return kind == RendererKind::kMock ? "mock" : "diffusion-http";
}

std::optional<RendererKind> parse_renderer_kind(std::string_view name) {
  if (name == "mock") return RendererKind::kMock;
  if (name == "diffusion-http" || name == "diffusion") return RendererKind::kDiffusionHttp;
  return std::nullopt;
}

void RenderBackendConfig::check() const {
  auto fail = [](std::string m) { throw Error(ErrorCode::kConfig, std::move(m), "renderer"); };
  if (!(timeout_s > 0)) fail("renderer timeout must be positive");
  if (max_in_flight < 1 || max_in_flight > 64) fail("renderer max_in_flight must be in [1, 64]");
  if (kind == RendererKind::kDiffusionHttp && endpoint.empty()) {
    fail("renderer endpoint is required for diffusion-http");
  }
  if (kind == RendererKind::kMock && !endpoint.empty()) {
    fail("renderer endpoint is only valid for diffusion-http");
  }
}

}  // namespace pni
