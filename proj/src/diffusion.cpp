// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "http_util.hpp"
#include "pni/error.hpp"
#include "pni/layout_text.hpp"
#include "pni/renderer.hpp"

namespace pni {

namespace {

constexpr std::string_view kPngMagic = "\x89PNG\r\n\x1a\n";

const RenderBackendConfig& checked(const RenderBackendConfig& config) {
  config.check();
  if (config.kind != RendererKind::kDiffusionHttp) {
    throw Error(ErrorCode::kConfig, "diffusion renderer needs kind diffusion-http", "renderer");
  }
  if (!detail::split_url(config.endpoint)) {
    throw Error(ErrorCode::kConfig,
                fmt::format("renderer endpoint is not an http(s) URL: '{}'", config.endpoint),
                "renderer");
  }
  return config;
}

class SlotGuard {
 public:
  explicit SlotGuard(std::counting_semaphore<64>& s) : s_(s) { s_.acquire(); }
  ~SlotGuard() { s_.release(); }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;

 private:
  std::counting_semaphore<64>& s_;
};

}  // namespace

DiffusionHttpRenderer::DiffusionHttpRenderer(RenderBackendConfig config)
    : config_(checked(config)), slots_(config_.max_in_flight) {
  const auto url = *detail::split_url(config_.endpoint);
  origin_ = url.origin;
  path_ = url.path.empty() ? "/" : url.path;
}

RenderArtifact DiffusionHttpRenderer::render(const Layout& layout) {
  const std::string body = serialize_layout(layout);
  httplib::Result res;
  {
    SlotGuard slot(slots_);
    httplib::Client client(origin_);
    detail::set_timeouts(client, config_.timeout_s);
    res = client.Post(path_, {{"Accept", std::string(kMediaPng)}}, body, "application/json");
  }
  if (!res) {
    spdlog::warn("renderer at {} unreachable: {}", origin_, httplib::to_string(res.error()));
    throw Error(ErrorCode::kRendererUnavailable, "renderer unavailable",
                httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw Error(ErrorCode::kRendererRejected, "renderer rejected layout",
                fmt::format("HTTP {}: {}", res->status, detail::excerpt(res->body)));
  }
  if (!std::string_view(res->body).starts_with(kPngMagic)) {
    throw Error(ErrorCode::kRendererProtocol, "renderer protocol error", "body is not a PNG image");
  }
  return {std::move(res->body), std::string(kMediaPng), std::string(id()), layout_hash(layout)};
}

std::unique_ptr<Renderer> make_renderer(const RenderBackendConfig& config) {
  config.check();
  if (config.kind == RendererKind::kMock) return std::make_unique<MockRenderer>();
  return std::make_unique<DiffusionHttpRenderer>(config);
}

}  // namespace pni
