// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#include "pni/service.hpp"

#include <gtest/gtest.h>
#include <httplib.h>

#include <thread>

#include "pni/error.hpp"
#include "pni/layout_text.hpp"
#include "pni/oracle.hpp"
#include "support/completions.hpp"
#include "support/mock_server.hpp"
#include "support/paths.hpp"
#include "support/svg_rects.hpp"
#include "support/temp_dir.hpp"

namespace pni {
namespace {

using testing::kProseOnly;
using testing::TempDir;
using testing::white_dog_scene;
using testing::worked_answer;

const char* kMoveDog = "move {x: 150, y: 400, width: 100, height: 100} to {x: 144, y: 132}";
const char* kBlackDog = "make the dog in {x: 140, y: 390, width: 120, height: 120} black";

Layout black_dog() {
  Layout l = white_dog_scene();
  l.objects[0].caption = "a black dog";
  return l;
}

Layout three_oranges() {
  Layout l;
  l.canvas = {512, 512};
  l.background = "a wooden table";
  l.objects = {{0, "an orange", {100, 250, 80, 80}},
               {1, "an orange", {220, 250, 80, 80}},
               {2, "an orange", {340, 250, 80, 80}}};
  return l;
}

class ServiceFixture : public ::testing::Test {
 protected:
  std::unique_ptr<EditService> make(std::vector<std::string> script,
                                    RenderBackendConfig renderer = {}) {
    ServiceConfig config;
    config.server.data_dir = tmp_.path();
    config.renderer = renderer;
    stub_ = script.empty() ? nullptr
                           : std::make_shared<StubLlm>(
                                 StubScript{std::move(script), ExhaustionPolicy::kError});
    auto corpus = std::make_shared<const ExampleCorpus>(load_corpus(testing::default_corpus_path()));
    return std::make_unique<EditService>(config, corpus, stub_);
  }

  template <typename Fn>
  static Error capture(Fn fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e;
    }
    ADD_FAILURE() << "expected an Error";
    return Error(ErrorCode::kInvalidArgument, "none");
  }

  TempDir tmp_;
  std::shared_ptr<StubLlm> stub_;
};

TEST_F(ServiceFixture, LayoutUploadRoundTrip) {
  auto svc = make({});
  const std::string id = svc->create_session(white_dog_scene());
  EXPECT_EQ(svc->get(id).current, white_dog_scene());
}

TEST_F(ServiceFixture, InvalidUploadIs422Class) {
  auto svc = make({});
  Layout bad = white_dog_scene();
  bad.objects[0].box.x = 480;
  const Error e = capture([&] { svc->create_session(bad); });
  EXPECT_EQ(e.code(), ErrorCode::kInvariant);
  EXPECT_EQ(http_status(e.code()), 422);
  EXPECT_NE(e.detail().find("in-canvas"), std::string::npos);
}

TEST_F(ServiceFixture, PromptCreatesThreeOranges) {
  auto svc = make({"OUTPUT LAYOUT:\n" + serialize_layout(three_oranges())});
  const std::string id = svc->create_session_from_prompt("a table with three oranges");
  EXPECT_EQ(svc->get(id).current.objects.size(), 3u);
}

TEST_F(ServiceFixture, EmptyPromptIsValidationError) {
  auto svc = make({"unused"});
  EXPECT_EQ(capture([&] { svc->create_session_from_prompt("  "); }).code(),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(stub_->calls(), 0u);
}

TEST_F(ServiceFixture, OracleEditUndoAndReapply) {
  auto svc = make({});
  const std::string id = svc->create_session(white_dog_scene());
  const EditRecord r = svc->apply_instruction(id, parse_instruction_text(kMoveDog));
  EXPECT_EQ(r.engine, EngineKind::kOracle);
  EXPECT_TRUE(r.validation.ok);
  const Layout moved = svc->get(id).current;
  EXPECT_EQ(moved.objects[0].box, (BoundingBox{94, 82, 100, 100}));

  EXPECT_EQ(svc->undo(id), white_dog_scene());
  EXPECT_EQ(svc->get(id).archived.size(), 1u);
  EXPECT_EQ(capture([&] { svc->undo(id); }).code(), ErrorCode::kNothingToUndo);

  svc->apply_instruction(id, parse_instruction_text(kMoveDog), EngineChoice::kOracle);
  EXPECT_EQ(svc->get(id).current, moved);
}

TEST_F(ServiceFixture, FreeFormThroughStub) {
  auto svc = make({worked_answer(black_dog())});
  const std::string id = svc->create_session(white_dog_scene());
  const EditRecord r = svc->apply_instruction(id, parse_instruction_text(kBlackDog));
  EXPECT_EQ(r.engine, EngineKind::kLlm);
  EXPECT_TRUE(r.validation.ok);
  EXPECT_EQ(svc->get(id).current.objects[0].caption, "a black dog");
  EXPECT_EQ(svc->get(id).history.size(), 1u);
}

TEST_F(ServiceFixture, RejectedLlmEditLeavesCurrent) {
  Layout bad = black_dog();
  bad.objects[1].caption = "a black beach ball";
  auto svc = make({worked_answer(bad)});
  const std::string id = svc->create_session(white_dog_scene());
  const EditRecord r = svc->apply_instruction(id, parse_instruction_text(kBlackDog));
  EXPECT_FALSE(r.applied);
  EXPECT_EQ(r.validation.failed_rules(), std::vector<std::string>{"frame"});
  const Session s = svc->get(id);
  EXPECT_EQ(s.current, white_dog_scene());
  EXPECT_TRUE(s.history.empty());
  EXPECT_EQ(s.rejected.size(), 1u);
}

TEST_F(ServiceFixture, ProseTwiceErrorsAndRecordsNothing) {
  auto svc = make({kProseOnly, kProseOnly});
  const std::string id = svc->create_session(white_dog_scene());
  const Error e = capture([&] { svc->apply_instruction(id, parse_instruction_text(kBlackDog)); });
  EXPECT_EQ(e.code(), ErrorCode::kNoLayoutFound);
  EXPECT_EQ(stub_->calls(), 2u);
  EXPECT_TRUE(svc->get(id).history.empty());
}

TEST_F(ServiceFixture, EmptySelection) {
  auto svc = make({});
  const std::string id = svc->create_session(white_dog_scene());
  const Error e = capture([&] {
    svc->apply_instruction(id, parse_instruction_text("delete {x: 300, y: 10, width: 20, height: 20}"));
  });
  EXPECT_EQ(e.code(), ErrorCode::kEmptySelection);
}

TEST_F(ServiceFixture, RenderBackends) {
  auto svc = make({});
  const std::string id = svc->create_session(white_dog_scene());
  const RenderArtifact a = svc->render(id);
  EXPECT_EQ(a.media_type, "image/svg+xml");
  EXPECT_EQ(a.bytes, svc->render(id, "mock").bytes);
  EXPECT_EQ(capture([&] { svc->render(id, "gligen"); }).code(), ErrorCode::kConfig);
  EXPECT_EQ(capture([&] { svc->render(id, "diffusion"); }).code(), ErrorCode::kConfig);
}

TEST_F(ServiceFixture, UnreachableDiffusion) {
  RenderBackendConfig r;
  r.kind = RendererKind::kDiffusionHttp;
  r.endpoint = "http://127.0.0.1:" + std::to_string(testing::closed_port()) + "/render";
  r.timeout_s = 1;
  auto svc = make({}, r);
  const std::string id = svc->create_session(white_dog_scene());
  EXPECT_EQ(capture([&] { svc->render(id); }).code(), ErrorCode::kRendererUnavailable);
  EXPECT_EQ(svc->render(id, "mock").media_type, "image/svg+xml");
}

TEST_F(ServiceFixture, ConcurrentInstructionsSerialize) {
  auto svc = make({});
  const std::string id = svc->create_session(white_dog_scene());
  std::thread a([&] {
    svc->apply_instruction(id, parse_instruction_text("add an apple at {x: 256, y: 256}"));
  });
  std::thread b([&] {
    svc->apply_instruction(id, parse_instruction_text("add a pear at {x: 100, y: 100}"));
  });
  a.join();
  b.join();
  const Session s = svc->get(id);
  ASSERT_EQ(s.history.size(), 2u);
  EXPECT_EQ(s.history[1].before, s.history[0].after);
  EXPECT_EQ(s.current.objects.size(), 5u);
}

TEST_F(ServiceFixture, HistoryReplayReproducesCurrent) {
  auto svc = make({});
  const std::string id = svc->create_session(white_dog_scene());
  for (const char* text : {kMoveDog, "add an apple at {x: 256, y: 256}",
                           "recaption {x: 330, y: 420, width: 50, height: 50} to a red ball",
                           "delete {x: 20, y: 20, width: 120, height: 300}"}) {
    svc->apply_instruction(id, parse_instruction_text(text));
  }
  const Session s = svc->get(id);
  Layout replay = s.initial;
  for (const auto& r : s.history) replay = apply_command(replay, parse_command(r.instruction));
  EXPECT_EQ(replay, s.current);
}

TEST(HttpStatus, Mapping) {
  EXPECT_EQ(http_status(ErrorCode::kUnknownSession), 404);
  EXPECT_EQ(http_status(ErrorCode::kNothingToUndo), 409);
  EXPECT_EQ(http_status(ErrorCode::kConfig), 400);
  EXPECT_EQ(http_status(ErrorCode::kEmptySelection), 422);
  EXPECT_EQ(http_status(ErrorCode::kNoLayoutFound), 502);
  EXPECT_EQ(http_status(ErrorCode::kIo), 500);
}

// HTTP surface.
class HttpFixture : public ServiceFixture {
 protected:
  void start(std::vector<std::string> script) {
    svc_ = make(std::move(script));
    api_ = std::make_unique<HttpApi>(*svc_);
    port_ = api_->bind("127.0.0.1", 0);
    thread_ = std::thread([this] { api_->serve(); });
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
    for (int i = 0; i < 100 && !api_->running(); ++i) {
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
  }
  void TearDown() override {
    if (api_) api_->stop();
    if (thread_.joinable()) thread_.join();
  }

  Json post(const std::string& path, const Json& body, int expect) {
    auto res = client_->Post(path, body.dump(), "application/json");
    EXPECT_TRUE(res);
    if (!res) return {};
    EXPECT_EQ(res->status, expect) << res->body;
    return Json::parse(res->body);
  }
  Json get(const std::string& path, int expect) {
    auto res = client_->Get(path);
    EXPECT_TRUE(res);
    if (!res) return {};
    EXPECT_EQ(res->status, expect) << res->body;
    return Json::parse(res->body);
  }

  std::unique_ptr<EditService> svc_;
  std::unique_ptr<HttpApi> api_;
  std::thread thread_;
  std::unique_ptr<httplib::Client> client_;
  int port_ = 0;
};

TEST_F(HttpFixture, Health) {
  start({"unused"});
  const Json h = get("/v1/health", 200);
  EXPECT_EQ(h["status"], "ok");
  EXPECT_EQ(h["engines"], Json::array({"oracle", "llm"}));
  EXPECT_EQ(h["renderers"], Json::array({"mock"}));
}

TEST_F(HttpFixture, FullFlow) {
  start({"OUTPUT LAYOUT:\n" + serialize_layout(white_dog_scene()), worked_answer(black_dog())});
  const Json created = post("/v1/sessions", {{"prompt", "a dog in a park"}}, 201);
  const std::string id = created["session_id"];
  EXPECT_EQ(layout_from_json(created["layout"]), white_dog_scene());

  const Json edit = post("/v1/sessions/" + id + "/instructions",
                         instruction_to_json(parse_instruction_text(kBlackDog)), 200);
  EXPECT_EQ(edit["engine"], "llm");
  EXPECT_EQ(edit["validation"]["ok"], true);
  EXPECT_EQ(edit["applied"], true);
  EXPECT_TRUE(edit.contains("completion_excerpt"));
  EXPECT_EQ(layout_from_json(edit["layout"]), black_dog());

  const Json summary = get("/v1/sessions/" + id, 200);
  EXPECT_EQ(summary["history"].size(), 1u);
  EXPECT_EQ(summary["history"][0]["engine"], "llm");

  auto render = client_->Get("/v1/sessions/" + id + "/render?backend=mock");
  ASSERT_TRUE(render);
  EXPECT_EQ(render->status, 200);
  EXPECT_EQ(render->get_header_value("Content-Type"), "image/svg+xml");
  EXPECT_EQ(render->get_header_value("X-Layout-Hash"), layout_hash(black_dog()));
  EXPECT_EQ(testing::svg_rects(render->body).size(), 4u);

  const Json undone = post("/v1/sessions/" + id + "/undo", Json::object(), 200);
  EXPECT_EQ(layout_from_json(undone["layout"]), white_dog_scene());
  const Json again = post("/v1/sessions/" + id + "/undo", Json::object(), 409);
  EXPECT_EQ(again["error"]["code"], "nothing-to-undo");
}

TEST_F(HttpFixture, LayoutBodyAsObjectOrText) {
  start({});
  const Json a = post("/v1/sessions", {{"layout", layout_to_json(white_dog_scene())}}, 201);
  const Json b = post("/v1/sessions", {{"layout", serialize_layout(white_dog_scene())}}, 201);
  EXPECT_EQ(a["layout"], b["layout"]);
  EXPECT_NE(a["session_id"], b["session_id"]);
}

TEST_F(HttpFixture, EngineOverrideAndOracleFlow) {
  start({});
  const std::string id =
      post("/v1/sessions", {{"layout", layout_to_json(white_dog_scene())}}, 201)["session_id"];
  Json body = instruction_to_json(parse_instruction_text(kMoveDog));
  body["engine"] = "oracle";
  const Json edit = post("/v1/sessions/" + id + "/instructions", body, 200);
  EXPECT_EQ(edit["engine"], "oracle");
  EXPECT_FALSE(edit.contains("completion_excerpt"));
  EXPECT_EQ(edit["layout"]["objects"][0]["box"],
            Json({{"x", 94}, {"y", 82}, {"width", 100}, {"height", 100}}));
  body["engine"] = "gpt";
  EXPECT_EQ(post("/v1/sessions/" + id + "/instructions", body, 422)["error"]["code"], "schema");
}

TEST_F(HttpFixture, ErrorStatuses) {
  start({});
  const std::string missing = "/v1/sessions/00000000-0000-4000-8000-000000000000";
  EXPECT_EQ(get(missing, 404)["error"]["code"], "unknown-session");
  auto bad = client_->Post("/v1/sessions", "{nope", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
  EXPECT_EQ(Json::parse(bad->body)["error"]["code"], "json-syntax");
  post("/v1/sessions", {{"prompt", ""}}, 422);
  post("/v1/sessions", Json::object(), 422);
  // No LLM configured: free-form instructions cannot run.
  const std::string id =
      post("/v1/sessions", {{"layout", layout_to_json(white_dog_scene())}}, 201)["session_id"];
  const Json e = post("/v1/sessions/" + id + "/instructions",
                      instruction_to_json(parse_instruction_text(kBlackDog)), 502);
  EXPECT_EQ(e["error"]["code"], "llm-unavailable");
  auto unknown_backend = client_->Get("/v1/sessions/" + id + "/render?backend=gligen");
  ASSERT_TRUE(unknown_backend);
  EXPECT_EQ(unknown_backend->status, 400);
  const Json dangling = post("/v1/sessions/" + id + "/instructions",
                             {{"tokens", Json::array({Json{{"ref", "s9"}}})}}, 422);
  EXPECT_EQ(dangling["error"]["code"], "dangling-shape-reference");
  EXPECT_EQ(get("/v1/nowhere", 404)["error"]["code"], "http");
}

TEST_F(HttpFixture, GetIsSideEffectFree) {
  start({});
  const std::string id =
      post("/v1/sessions", {{"layout", layout_to_json(white_dog_scene())}}, 201)["session_id"];
  const Json first = get("/v1/sessions/" + id, 200);
  client_->Get("/v1/sessions/" + id + "/render");
  get("/v1/health", 200);
  EXPECT_EQ(get("/v1/sessions/" + id, 200), first);
}

}  // namespace
}  // namespace pni
