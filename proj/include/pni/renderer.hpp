// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>

#include "pni/layout.hpp"

namespace pni {

inline constexpr std::string_view kMediaSvg = "image/svg+xml";
inline constexpr std::string_view kMediaPng = "image/png";

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

/// fnv1a64(caption) mod 360.
int caption_hue(std::string_view caption);

/// 16 lowercase hex digits of fnv1a64 over the canonical layout text.
std::string layout_hash(const Layout& layout);

struct RenderArtifact {
  std::string bytes;
  std::string media_type;
  std::string renderer_id;
  std::string layout_hash;
};

/// Canvas-sized SVG: a background rect, then per object a translucent rect
/// at its box and its caption at the box's top-left. Byte-deterministic.
std::string render_svg(const Layout& layout);
RenderArtifact render_mock(const Layout& layout);

enum class RendererKind { kMock, kDiffusionHttp };

std::string_view renderer_kind_name(RendererKind kind);
/// "mock", "diffusion-http" or its short form "diffusion".
std::optional<RendererKind> parse_renderer_kind(std::string_view name);

struct RenderBackendConfig {
  RendererKind kind = RendererKind::kMock;
  std::string endpoint;
  double timeout_s = 300.0;
  int max_in_flight = 2;

  /// Throws kConfig.
  void check() const;
};

class Renderer {
 public:
  virtual ~Renderer() = default;
  virtual RenderArtifact render(const Layout& layout) = 0;
  virtual std::string_view id() const = 0;
};

class MockRenderer final : public Renderer {
 public:
  RenderArtifact render(const Layout& layout) override { return render_mock(layout); }
  std::string_view id() const override { return "mock"; }
};

/// POSTs the canonical layout to an external layout-to-image service and
/// expects PNG bytes back. At most `max_in_flight` requests run at once.
class DiffusionHttpRenderer final : public Renderer {
 public:
  explicit DiffusionHttpRenderer(RenderBackendConfig config);

  /// Throws kRendererUnavailable, kRendererRejected or kRendererProtocol.
  RenderArtifact render(const Layout& layout) override;
  std::string_view id() const override { return "diffusion-http"; }

 private:
  RenderBackendConfig config_;
  std::string origin_;
  std::string path_;
  std::counting_semaphore<64> slots_;
};

std::unique_ptr<Renderer> make_renderer(const RenderBackendConfig& config);

}  // namespace pni
