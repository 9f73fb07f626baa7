// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#include "pni/service.hpp"

#include <httplib.h>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "http_util.hpp"
#include "pni/error.hpp"
#include "pni/layout_text.hpp"
#include "pni/wire.hpp"
#include "text_util.hpp"

namespace pni {

std::shared_ptr<LlmBackend> make_llm_backend(const ServiceConfig::Llm& config) {
  if (config.mode == LlmMode::kStub) {
    return std::make_shared<StubLlm>(load_stub_script(config.stub_script));
  }
  if (config.client.api_key.empty()) {
    spdlog::info("{} is not set; the llm engine is unavailable", kLlmApiKeyEnv);
    return nullptr;
  }
  return std::make_shared<HttpLlmClient>(config.client);
}

EditService::EditService(ServiceConfig config, std::shared_ptr<const ExampleCorpus> corpus,
                         std::shared_ptr<LlmBackend> llm)
    : config_(std::move(config)),
      engine_(std::move(corpus), std::move(llm), EngineOptions{config_.prompting.k, config_.validation}),
      store_(config_.server.data_dir) {
  if (config_.renderer.kind == RendererKind::kDiffusionHttp) {
    diffusion_ = std::make_unique<DiffusionHttpRenderer>(config_.renderer);
  }
}

std::unique_ptr<EditService> EditService::from_config(const ServiceConfig& config) {
  auto corpus = std::make_shared<const ExampleCorpus>(load_corpus(config.prompting.corpus_path));
  return std::make_unique<EditService>(config, std::move(corpus), make_llm_backend(config.llm));
}

std::string EditService::create_session(const Layout& layout) {
  // Uploaded layouts are stored as given, so clamping does not apply here.
  ValidationOptions strict = config_.validation;
  strict.clamp_policy = false;
  const ValidationReport report = validate_structure(layout, strict);
  if (!report.ok) {
    std::string why;
    for (const auto& c : report.checks) {
      if (!c.passed) why += fmt::format("{}{}: {}", why.empty() ? "" : "; ", c.rule_id, c.detail);
    }
    throw Error(ErrorCode::kInvariant, "layout failed validation", why);
  }
  return store_.create(layout);
}

std::string EditService::create_session_from_prompt(std::string_view prompt,
                                                    std::optional<Canvas> canvas) {
  if (detail::trim(prompt).empty()) {
    throw Error(ErrorCode::kInvalidArgument, "scene prompt is empty");
  }
  Layout drafted = engine_.create_from_prompt(prompt, canvas.value_or(config_.prompting.canvas));
  return store_.create(drafted);
}

EditRecord EditService::apply_instruction(const std::string& session_id,
                                          const MultimodalInstruction& instruction,
                                          EngineChoice engine) {
  EditRecord out;
  store_.update(session_id, [&](Session& s) {
    out = engine_.apply(s.current, instruction, engine);
    if (out.applied) {
      s.current = out.after;
      s.history.push_back(out);
    } else {
      s.rejected.push_back(out);
    }
  });
  spdlog::info("session {}: {} edit via {} ({}; {} ms)", session_id,
               out.applied ? "applied" : "rejected", engine_kind_name(out.engine),
               out.validation.ok ? "ok" : "validation failed", out.duration_ms);
  return out;
}

Layout EditService::undo(const std::string& session_id) {
  Layout current;
  store_.update(session_id, [&](Session& s) {
    if (s.history.empty()) throw Error(ErrorCode::kNothingToUndo, "nothing to undo", session_id);
    s.current = s.history.back().before;
    s.archived.push_back(std::move(s.history.back()));
    s.history.pop_back();
    current = s.current;
  });
  return current;
}

Renderer& EditService::renderer_for(const std::optional<std::string>& backend) {
  RendererKind kind = config_.renderer.kind;
  if (backend && !backend->empty()) {
    auto parsed = parse_renderer_kind(*backend);
    if (!parsed) {
      throw Error(ErrorCode::kConfig, fmt::format("unknown render backend '{}'", *backend),
                  "renderer");
    }
    kind = *parsed;
  }
  if (kind == RendererKind::kMock) return mock_;
  if (!diffusion_) {
    throw Error(ErrorCode::kConfig, "diffusion renderer is not configured", "renderer");
  }
  return *diffusion_;
}

RenderArtifact EditService::render(const std::string& session_id,
                                   const std::optional<std::string>& backend) {
  Renderer& renderer = renderer_for(backend);
  return renderer.render(store_.get(session_id).current);
}

Json EditService::health() const {
  Json engines = Json::array({"oracle"});
  if (engine_.has_llm()) engines.push_back("llm");
  Json renderers = Json::array({"mock"});
  if (diffusion_) renderers.push_back(std::string(diffusion_->id()));
  return Json{{"status", "ok"},
              {"engines", std::move(engines)},
              {"renderers", std::move(renderers)},
              {"sessions", store_.size()},
              {"skipped_files", store_.skipped_files().size()}};
}

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownSession:
      return 404;
    case ErrorCode::kNothingToUndo:
      return 409;
    case ErrorCode::kJsonSyntax:
    case ErrorCode::kConfig:
      return 400;
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kUnplaceableBox:
    case ErrorCode::kPointOutsideCanvas:
    case ErrorCode::kShapeSyntax:
    case ErrorCode::kShapeValidation:
    case ErrorCode::kDanglingReference:
    case ErrorCode::kInvalidInstruction:
    case ErrorCode::kSchema:
    case ErrorCode::kInvariant:
    case ErrorCode::kNotOracleCommand:
    case ErrorCode::kEmptySelection:
      return 422;
    case ErrorCode::kNoLayoutFound:
    case ErrorCode::kLlmUnavailable:
    case ErrorCode::kLlmRejected:
    case ErrorCode::kLlmProtocol:
    case ErrorCode::kStubExhausted:
    case ErrorCode::kRendererUnavailable:
    case ErrorCode::kRendererRejected:
    case ErrorCode::kRendererProtocol:
      return 502;
    case ErrorCode::kCorpus:
    case ErrorCode::kIo:
      return 500;
  }
  return 500;
}

Json session_summary_json(const Session& s) {
  Json history = Json::array();
  for (std::size_t i = 0; i < s.history.size(); ++i) {
    const EditRecord& r = s.history[i];
    history.push_back(Json{{"index", i},
                           {"instruction", serialize_instruction(r.instruction)},
                           {"engine", std::string(engine_kind_name(r.engine))},
                           {"ok", r.validation.ok},
                           {"attempts", r.attempts},
                           {"duration_ms", r.duration_ms}});
  }
  return Json{{"session_id", s.session_id},
              {"layout", layout_to_json(s.current)},
              {"history", std::move(history)},
              {"archived_count", s.archived.size()},
              {"rejected_count", s.rejected.size()},
              {"created_at", s.created_at},
              {"updated_at", s.updated_at}};
}

Json edit_response_json(const std::string& session_id, const EditRecord& record,
                        const Layout& current) {
  Json out{{"session_id", session_id},
           {"layout", layout_to_json(current)},
           {"validation", report_to_json(record.validation)},
           {"engine", std::string(engine_kind_name(record.engine))},
           {"applied", record.applied},
           {"attempts", record.attempts},
           {"duration_ms", record.duration_ms}};
  if (record.engine == EngineKind::kLlm) {
    out["completion_excerpt"] = detail::excerpt(record.completion_text, 2000);
    if (!record.applied) out["proposed_layout"] = layout_to_json(record.after);
  }
  return out;
}

namespace {

Json parse_body(const httplib::Request& req) {
  try {
    return Json::parse(req.body);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kJsonSyntax, "request body is not valid JSON", e.what());
  }
}

Layout layout_from_body(const Json& v) {
  if (v.is_string()) return parse_layout(v.get<std::string>());
  return layout_from_json(v);
}

void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, const Error& e) {
  send_json(res, http_status(e.code()), error_to_json(e));
}

template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const Error& e) {
      send_error(res, e);
    } catch (const std::exception& e) {
      spdlog::error("unhandled error on {} {}: {}", req.method, req.path, e.what());
      send_json(res, 500, Json{{"error", {{"code", "internal"}, {"message", e.what()}}}});
    }
  };
}

}  // namespace

HttpApi::HttpApi(EditService& service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  // The library default adds SO_REUSEPORT, which lets a second server share a
  // busy port instead of failing.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  });
  install_routes();
}

HttpApi::~HttpApi() { stop(); }

void HttpApi::install_routes() {
  auto& s = service_;
  httplib::Server& srv = *server_;

  srv.Get("/v1/health", guarded([&s](const httplib::Request&, httplib::Response& res) {
            send_json(res, 200, s.health());
          }));

  srv.Post("/v1/sessions", guarded([&s](const httplib::Request& req, httplib::Response& res) {
             const Json body = parse_body(req);
             if (!body.is_object()) throw Error(ErrorCode::kSchema, "body must be an object");
             const bool has_prompt = body.contains("prompt");
             if (has_prompt == body.contains("layout")) {
               throw Error(ErrorCode::kSchema, "body needs exactly one of 'prompt' or 'layout'");
             }
             std::string id;
             if (has_prompt) {
               if (!body["prompt"].is_string()) {
                 throw Error(ErrorCode::kSchema, "'prompt' must be a string");
               }
               std::optional<Canvas> canvas;
               if (body.contains("canvas")) {
                 const Json& c = body["canvas"];
                 if (!c.is_object() || !c.value("width", Json()).is_number_integer() ||
                     !c.value("height", Json()).is_number_integer()) {
                   throw Error(ErrorCode::kSchema, "'canvas' needs integer width and height");
                 }
                 canvas = Canvas{c["width"].get<std::int64_t>(), c["height"].get<std::int64_t>()};
                 if (!canvas->valid()) throw Error(ErrorCode::kSchema, "canvas is too small");
               }
               id = s.create_session_from_prompt(body["prompt"].get<std::string>(), canvas);
             } else {
               id = s.create_session(layout_from_body(body["layout"]));
             }
             send_json(res, 201,
                       Json{{"session_id", id}, {"layout", layout_to_json(s.get(id).current)}});
           }));

  srv.Get("/v1/sessions/:id", guarded([&s](const httplib::Request& req, httplib::Response& res) {
            send_json(res, 200, session_summary_json(s.get(req.path_params.at("id"))));
          }));

  srv.Post("/v1/sessions/:id/instructions",
           guarded([&s](const httplib::Request& req, httplib::Response& res) {
             const std::string id = req.path_params.at("id");
             const Json body = parse_body(req);
             EngineChoice engine = EngineChoice::kAuto;
             if (body.is_object() && body.contains("engine")) {
               const Json& e = body["engine"];
               auto parsed = e.is_string() ? parse_engine_choice(e.get<std::string>())
                                           : std::nullopt;
               if (!parsed) {
                 throw Error(ErrorCode::kSchema, "'engine' must be auto, oracle or llm");
               }
               engine = *parsed;
             }
             const MultimodalInstruction instruction = instruction_from_json(body);
             const EditRecord record = s.apply_instruction(id, instruction, engine);
             send_json(res, 200, edit_response_json(id, record, s.get(id).current));
           }));

  srv.Post("/v1/sessions/:id/undo",
           guarded([&s](const httplib::Request& req, httplib::Response& res) {
             const std::string id = req.path_params.at("id");
             send_json(res, 200, Json{{"session_id", id}, {"layout", layout_to_json(s.undo(id))}});
           }));

  srv.Get("/v1/sessions/:id/render",
          guarded([&s](const httplib::Request& req, httplib::Response& res) {
            std::optional<std::string> backend;
            if (req.has_param("backend")) backend = req.get_param_value("backend");
            RenderArtifact art = s.render(req.path_params.at("id"), backend);
            res.status = 200;
            res.set_header("X-Layout-Hash", art.layout_hash);
            res.set_header("X-Renderer", art.renderer_id);
            res.set_content(std::move(art.bytes), art.media_type);
          }));

  srv.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    const std::string message = res.status == 404 ? "no such route" : "request failed";
    send_json(res, res.status, Json{{"error", {{"code", "http"}, {"message", message}}}});
  });

  srv.set_logger([](const httplib::Request& req, const httplib::Response& res) {
    spdlog::info("{} {} -> {}", req.method, req.path, res.status);
  });
}

int HttpApi::bind(const std::string& host, int port) {
  int bound = -1;
  if (port == 0) {
    bound = server_->bind_to_any_port(host);
  } else if (server_->bind_to_port(host, port)) {
    bound = port;
  }
  if (bound < 0) {
    throw Error(ErrorCode::kIo, fmt::format("cannot bind {}:{}", host, port), "bind");
  }
  return bound;
}

void HttpApi::serve() { server_->listen_after_bind(); }

void HttpApi::stop() {
  if (server_) server_->stop();
}

bool HttpApi::running() const { return server_->is_running(); }

}  // namespace pni
