// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "pni/config.hpp"
#include "pni/engine.hpp"
#include "pni/renderer.hpp"
#include "pni/session.hpp"

namespace httplib {
class Server;
}

namespace pni {

/// Builds the LLM backend a config asks for. Live mode without an api key
/// yields null, so only LLM requests fail and the oracle keeps working.
std::shared_ptr<LlmBackend> make_llm_backend(const ServiceConfig::Llm& config);

/// Session operations behind the HTTP API. Thread-safe.
class EditService {
 public:
  EditService(ServiceConfig config, std::shared_ptr<const ExampleCorpus> corpus,
              std::shared_ptr<LlmBackend> llm);

  /// Loads the corpus and builds backends. Throws kCorpus, kIo or kConfig.
  static std::unique_ptr<EditService> from_config(const ServiceConfig& config);

  std::string create_session(const Layout& layout);
  /// Drafts the initial layout with the LLM. `canvas` defaults to the
  /// configured prompting canvas.
  std::string create_session_from_prompt(std::string_view prompt,
                                         std::optional<Canvas> canvas = std::nullopt);

  /// Runs the instruction against the current layout and records it. The
  /// layout advances for oracle edits and for LLM edits that validated.
  EditRecord apply_instruction(const std::string& session_id,
                               const MultimodalInstruction& instruction,
                               EngineChoice engine = EngineChoice::kAuto);

  /// Throws kNothingToUndo on an empty history.
  Layout undo(const std::string& session_id);

  /// `backend` is "mock" or "diffusion"/"diffusion-http"; unset uses the
  /// configured kind. Throws kConfig for unknown or unconfigured backends.
  RenderArtifact render(const std::string& session_id,
                        const std::optional<std::string>& backend = std::nullopt);

  Session get(const std::string& session_id) const { return store_.get(session_id); }
  Json health() const;

  const SessionStore& store() const { return store_; }
  const EditEngine& engine() const { return engine_; }
  const ServiceConfig& config() const { return config_; }

 private:
  Renderer& renderer_for(const std::optional<std::string>& backend);

  ServiceConfig config_;
  EditEngine engine_;
  SessionStore store_;
  MockRenderer mock_;
  std::unique_ptr<Renderer> diffusion_;
};

/// HTTP status for an error code.
int http_status(ErrorCode code);

/// Summary of a session for GET responses.
Json session_summary_json(const Session& session);
/// Response body for an applied instruction.
Json edit_response_json(const std::string& session_id, const EditRecord& record,
                        const Layout& current);

/// JSON API over an EditService. Requests run on httplib's worker pool.
class HttpApi {
 public:
  explicit HttpApi(EditService& service);
  ~HttpApi();
  HttpApi(const HttpApi&) = delete;
  HttpApi& operator=(const HttpApi&) = delete;

  /// Binds without serving; port 0 picks a free port. Throws kIo when
  /// the address cannot be bound. Returns the bound port.
  int bind(const std::string& host, int port);
  /// Serves until stop(). Call after bind().
  void serve();
  void stop();
  bool running() const;

 private:
  void install_routes();

  EditService& service_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace pni
