// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#include "pni/cli.hpp"

#include <pthread.h>
#include <signal.h>

#include <atomic>
#include <filesystem>
#include <optional>
#include <ostream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "pni/config.hpp"
#include "pni/engine.hpp"
#include "pni/io.hpp"
#include "pni/layout_text.hpp"
#include "pni/renderer.hpp"
#include "pni/service.hpp"
#include "pni/wire.hpp"
#include "text_util.hpp"

namespace pni {

namespace fs = std::filesystem;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo:
    case ErrorCode::kConfig:
    case ErrorCode::kCorpus:
    case ErrorCode::kLlmUnavailable:
    case ErrorCode::kLlmRejected:
    case ErrorCode::kLlmProtocol:
    case ErrorCode::kStubExhausted:
    case ErrorCode::kRendererUnavailable:
    case ErrorCode::kRendererRejected:
    case ErrorCode::kRendererProtocol:
      return kExitEnvironment;
    default:
      return kExitFailed;
  }
}

namespace {

struct Globals {
  std::optional<fs::path> config;
  bool json = false;
  bool verbose = false;
};

void setup_logging(spdlog::level::level_enum level) {
  auto logger = std::make_shared<spdlog::logger>(
      "pni", std::make_shared<spdlog::sinks::stderr_sink_mt>());
  logger->set_level(level);
  spdlog::set_default_logger(logger);
}

ServiceConfig config_for(const Globals& g) { return load_config(g.config); }

EditEngine engine_for(const ServiceConfig& config) {
  auto corpus = std::make_shared<const ExampleCorpus>(load_corpus(config.prompting.corpus_path));
  return EditEngine(std::move(corpus), make_llm_backend(config.llm),
                    EngineOptions{config.prompting.k, config.validation});
}

Layout read_layout(const fs::path& path) { return parse_layout(read_text_file(path)); }

Json record_json(const EditRecord& r) {
  Json j = report_to_json(r.validation);
  j["engine"] = std::string(engine_kind_name(r.engine));
  j["applied"] = r.applied;
  j["attempts"] = r.attempts;
  return j;
}

// ---- edit -----------------------------------------------------------------

struct EditArgs {
  fs::path layout;
  std::string instruction;
  std::string engine = "auto";
  std::optional<fs::path> out;
  bool render = false;
};

int cmd_edit(const Globals& g, const EditArgs& a, std::ostream& out) {
  const auto choice = parse_engine_choice(a.engine);
  if (!choice) {
    throw Error(ErrorCode::kConfig, fmt::format("--engine must be auto, oracle or llm, got '{}'",
                                                a.engine));
  }
  if (a.render && !a.out) throw Error(ErrorCode::kConfig, "--render needs --out");
  const ServiceConfig config = config_for(g);
  const Layout before = read_layout(a.layout);
  const MultimodalInstruction instruction = parse_instruction_text(a.instruction);
  const EditEngine engine = engine_for(config);
  const EditRecord r = engine.apply(before, instruction, *choice);

  Json result = record_json(r);
  if (r.applied && a.out) {
    write_file_atomic(*a.out, serialize_layout(r.after));
    result["out"] = a.out->string();
    if (a.render) {
      fs::path svg = *a.out;
      svg.replace_extension(".svg");
      write_file_atomic(svg, render_svg(r.after));
      result["render"] = svg.string();
    }
  } else {
    result[r.applied ? "layout" : "proposed_layout"] = layout_to_json(r.after);
  }
  out << result.dump(2) << '\n';
  return r.validation.ok ? kExitOk : kExitFailed;
}

// ---- replay ---------------------------------------------------------------

struct Script {
  fs::path layout;
  struct Step {
    std::size_t line;
    std::string text;
  };
  std::vector<Step> edits;
};

Script parse_script(std::string_view text, const fs::path& base) {
  Script script;
  bool have_layout = false;
  std::size_t line_no = 0;
  for (std::size_t pos = 0; pos <= text.size();) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = detail::trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const std::size_t space = line.find_first_of(" \t");
    const std::string_view verb = line.substr(0, space);
    const std::string_view rest =
        space == std::string_view::npos ? std::string_view{} : detail::trim(line.substr(space));
    auto fail = [&](std::string_view what) {
      throw Error(ErrorCode::kInvalidArgument, fmt::format("script line {}: {}", line_no, what),
                  "script");
    };
    if (verb == "layout") {
      if (have_layout) fail("more than one layout line");
      if (rest.empty()) fail("layout needs a path");
      const fs::path p(std::string{rest});
      script.layout = p.is_absolute() ? p : base / p;
      have_layout = true;
    } else if (verb == "edit") {
      if (!have_layout) fail("edit before the layout line");
      if (rest.empty()) fail("edit needs an instruction");
      script.edits.push_back({line_no, std::string(rest)});
    } else {
      fail(fmt::format("unknown command '{}'", verb));
    }
  }
  if (!have_layout) throw Error(ErrorCode::kInvalidArgument, "no layout line", "script");
  return script;
}

struct ReplayArgs {
  fs::path script;
  std::string engine = "auto";
};

int cmd_replay(const Globals& g, const ReplayArgs& a, std::ostream& out, std::ostream& err) {
  const auto choice = parse_engine_choice(a.engine);
  if (!choice) throw Error(ErrorCode::kConfig, "--engine must be auto, oracle or llm");
  const Script script = parse_script(read_text_file(a.script), a.script.parent_path());
  const ServiceConfig config = config_for(g);
  Layout current = read_layout(script.layout);
  const EditEngine engine = engine_for(config);

  std::size_t ok = 0, failed = 0;
  for (std::size_t i = 0; i < script.edits.size(); ++i) {
    const auto& step = script.edits[i];
    Json line{{"step", i + 1}, {"line", step.line}, {"instruction", step.text}};
    try {
      const EditRecord r = engine.apply(current, parse_instruction_text(step.text), *choice);
      if (r.applied) current = r.after;
      line.update(record_json(r));
      line["ok"] = r.validation.ok;
      line["layout"] = layout_to_json(current);
      (r.validation.ok ? ok : failed) += 1;
    } catch (const Error& e) {
      if (exit_code_for(e.code()) == kExitEnvironment) {
        Json body = error_to_json(e);
        body["error"]["step"] = i + 1;
        err << body.dump() << '\n';
        return kExitEnvironment;
      }
      line["ok"] = false;
      line.update(error_to_json(e));
      ++failed;
    }
    out << line.dump() << '\n';
  }
  out << Json{{"summary", {{"steps", script.edits.size()}, {"ok", ok}, {"failed", failed}}}}.dump()
      << '\n';
  return failed == 0 ? kExitOk : kExitFailed;
}

// ---- validate / render ----------------------------------------------------

int cmd_validate(const Globals& g, const fs::path& path, std::ostream& out) {
  ValidationOptions options = config_for(g).validation;
  // A file on disk is checked as written; nothing clamps it.
  options.clamp_policy = false;
  const ValidationReport report =
      validate_structure(parse_layout_unchecked(read_text_file(path)), options);
  out << report_to_json(report).dump(2) << '\n';
  return report.ok ? kExitOk : kExitFailed;
}

struct RenderArgs {
  fs::path layout;
  fs::path out;
  std::optional<std::string> backend;
};

int cmd_render(const Globals& g, const RenderArgs& a, std::ostream& out) {
  RenderBackendConfig rc = config_for(g).renderer;
  if (a.backend) {
    auto kind = parse_renderer_kind(*a.backend);
    if (!kind) throw Error(ErrorCode::kConfig, fmt::format("unknown render backend '{}'", *a.backend));
    if (*kind == RendererKind::kDiffusionHttp && rc.kind != RendererKind::kDiffusionHttp) {
      throw Error(ErrorCode::kConfig, "diffusion renderer is not configured");
    }
    if (*kind == RendererKind::kMock) rc = RenderBackendConfig{};
  }
  const Layout layout = read_layout(a.layout);
  const RenderArtifact art = make_renderer(rc)->render(layout);
  write_file_atomic(a.out, art.bytes);
  out << Json{{"out", a.out.string()},
              {"media_type", art.media_type},
              {"renderer", art.renderer_id},
              {"layout_hash", art.layout_hash},
              {"bytes", art.bytes.size()}}
             .dump(2)
      << '\n';
  return kExitOk;
}

// ---- serve ----------------------------------------------------------------

struct ServeArgs {
  std::optional<int> port;
  std::optional<std::string> bind;
  std::optional<fs::path> data_dir;
};

int cmd_serve(const Globals& g, const ServeArgs& a, std::ostream& out) {
  ServiceConfig config = config_for(g);
  if (a.port) config.server.port = *a.port;
  if (a.bind) config.server.bind_address = *a.bind;
  if (a.data_dir) config.server.data_dir = *a.data_dir;

  // Block the shutdown signals before any worker thread exists so only the
  // waiter below receives them.
  sigset_t signals, previous;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, &previous);
  struct RestoreMask {
    sigset_t mask;
    ~RestoreMask() { pthread_sigmask(SIG_SETMASK, &mask, nullptr); }
  } restore{previous};

  auto service = EditService::from_config(config);
  HttpApi api(*service);
  const int port = api.bind(config.server.bind_address, config.server.port);
  out << fmt::format("listening on {}:{}", config.server.bind_address, port) << std::endl;
  spdlog::info("serving {} session(s) from {}", service->store().size(),
               config.server.data_dir.string());

  std::atomic<bool> done{false};
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    if (!done) spdlog::info("signal {} received; shutting down", sig);
    api.stop();
  });
  api.serve();
  done = true;
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  return kExitOk;
}

void emit_error(std::ostream& err, const Error& e) { err << error_to_json(e).dump() << '\n'; }

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Layout editing with drawn shapes and text instructions.", "pni"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "service config file (JSON)");
  app.add_flag("--json", g.json, "JSON errors on stderr (always on)");
  app.add_flag("-v,--verbose", g.verbose, "log progress to stderr");

  EditArgs edit;
  auto* edit_cmd = app.add_subcommand("edit", "apply one instruction to a layout file");
  edit_cmd->add_option("layout", edit.layout, "layout file")->required();
  edit_cmd->add_option("instruction", edit.instruction, "instruction with inline shapes")
      ->required();
  edit_cmd->add_option("--engine", edit.engine, "auto, oracle or llm");
  edit_cmd->add_option("--out", edit.out, "write the edited layout here");
  edit_cmd->add_flag("--render", edit.render, "also write a mock SVG beside --out");

  ReplayArgs replay;
  auto* replay_cmd = app.add_subcommand("replay", "run a script of edits");
  replay_cmd->add_option("script", replay.script, "script file")->required();
  replay_cmd->add_option("--engine", replay.engine, "auto, oracle or llm");

  fs::path validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "check a layout file");
  validate_cmd->add_option("layout", validate_path, "layout file")->required();

  RenderArgs render;
  auto* render_cmd = app.add_subcommand("render", "render a layout file");
  render_cmd->add_option("layout", render.layout, "layout file")->required();
  render_cmd->add_option("--out", render.out, "output image file")->required();
  render_cmd->add_option("--backend", render.backend, "mock or diffusion");

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "run the HTTP service");
  serve_cmd->add_option("--port", serve.port, "port; 0 picks a free one");
  serve_cmd->add_option("--bind", serve.bind, "bind address");
  serve_cmd->add_option("--data-dir", serve.data_dir, "session directory");

  std::vector<std::string> argv_storage{"pni"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << Json{{"error", {{"code", "usage"}, {"message", e.what()}}}}.dump() << '\n';
    return kExitEnvironment;
  }

  const bool serving = serve_cmd->parsed();
  setup_logging(g.verbose ? spdlog::level::debug
                          : (serving ? spdlog::level::info : spdlog::level::warn));
  try {
    if (edit_cmd->parsed()) return cmd_edit(g, edit, out);
    if (replay_cmd->parsed()) return cmd_replay(g, replay, out, err);
    if (validate_cmd->parsed()) return cmd_validate(g, validate_path, out);
    if (render_cmd->parsed()) return cmd_render(g, render, out);
    return cmd_serve(g, serve, out);
  } catch (const Error& e) {
    emit_error(err, e);
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << Json{{"error", {{"code", "internal"}, {"message", e.what()}}}}.dump() << '\n';
    return kExitEnvironment;
  }
}

}  // namespace pni
