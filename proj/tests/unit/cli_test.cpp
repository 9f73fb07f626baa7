// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#include "pni/cli.hpp"

#include <gtest/gtest.h>
#include <httplib.h>

#include <fstream>
#include <sstream>

#include "pni/io.hpp"
#include "pni/layout_text.hpp"
#include "pni/service.hpp"
#include "support/completions.hpp"
#include "support/env_guard.hpp"
#include "support/paths.hpp"
#include "support/process.hpp"
#include "support/svg_rects.hpp"
#include "support/temp_dir.hpp"

namespace pni {
namespace {

using testing::EnvGuard;
using testing::TempDir;
using testing::white_dog_scene;
using testing::worked_answer;

const char* kDogMove = "move {x: 150, y: 400, width: 100, height: 100} to {x: 144, y: 132}";
const char* kBlackDog = "make the dog in {x: 140, y: 390, width: 120, height: 120} black";

struct CliResult {
  int code;
  std::string out;
  std::string err;
  Json out_json() const { return Json::parse(out); }
  Json err_json() const { return Json::parse(err); }
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    write_file_atomic(tmp_ / "scene.json", serialize_layout(white_dog_scene()));
  }

  std::string path(const std::string& name) const { return (tmp_ / name).string(); }

  std::string write_stub(const std::vector<std::string>& completions) {
    Json script{{"completions", completions}, {"exhaustion", "repeat-last"}};
    write_file_atomic(tmp_ / "stub.json", script.dump());
    return path("stub.json");
  }

  TempDir tmp_;
  // Keep the developer's environment out of these tests.
  EnvGuard no_config_{"PNI_CONFIG", nullptr};
  EnvGuard no_stub_{"PNI_LLM_STUB", nullptr};
  EnvGuard no_key_{"PNI_LLM_API_KEY", nullptr};
};

TEST_F(CliTest, EditDogMoveThroughOracle) {
  const CliResult r = run({"edit", path("scene.json"), kDogMove, "--engine", "oracle", "--out",
                     path("out.json")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out_json()["ok"], true);
  EXPECT_EQ(r.out_json()["engine"], "oracle");
  const Layout out = parse_layout(read_text_file(tmp_ / "out.json"));
  EXPECT_EQ(out.objects[0].box, (BoundingBox{94, 82, 100, 100}));
}

TEST_F(CliTest, EditWritesMockRenderBesideOutput) {
  const CliResult r = run({"edit", path("scene.json"), kDogMove, "--out", path("out.json"),
                     "--render"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rects = testing::svg_rects(read_text_file(tmp_ / "out.svg"));
  ASSERT_EQ(rects.size(), 4u);
  EXPECT_EQ(rects[1].num("x"), 94);
}

TEST_F(CliTest, EditWithoutOutPrintsLayout) {
  const CliResult r = run({"edit", path("scene.json"), kDogMove});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(layout_from_json(r.out_json()["layout"]).objects[0].box.y, 82);
}

TEST_F(CliTest, EditLlmWithStubScript) {
  Layout black = white_dog_scene();
  black.objects[0].caption = "a black dog";
  EnvGuard stub("PNI_LLM_STUB", write_stub({worked_answer(black)}).c_str());
  const CliResult r = run({"edit", path("scene.json"), kBlackDog, "--engine", "llm", "--out",
                     path("out.json")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out_json()["engine"], "llm");
  EXPECT_EQ(parse_layout(read_text_file(tmp_ / "out.json")), black);
}

TEST_F(CliTest, MalformedShapeLiteralIsExitOneWithOffset) {
  const CliResult r = run({"edit", path("scene.json"), "move {x: 150, y: 400, width: 100 to {x: 1, y: 1}"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.err_json()["error"]["code"], "shape-syntax");
  EXPECT_TRUE(r.err_json()["error"].contains("offset"));
  EXPECT_TRUE(r.out.empty());
}

TEST_F(CliTest, EditFailuresAndEnvironmentErrors) {
  EXPECT_EQ(run({"edit", path("missing.json"), kDogMove}).code, 2);
  EXPECT_EQ(run({"edit", path("scene.json"), kDogMove, "--engine", "magic"}).code, 2);
  // Free-form text with no key and no stub: the llm is unavailable.
  const CliResult r = run({"edit", path("scene.json"), kBlackDog});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.err_json()["error"]["code"], "llm-unavailable");
  // Selector over empty canvas.
  EXPECT_EQ(run({"edit", path("scene.json"), "delete {x: 300, y: 10, width: 20, height: 20}"}).code,
            1);
}

TEST_F(CliTest, EditRejectedLlmAnswerExitsOne) {
  Layout bad = white_dog_scene();
  bad.objects[0].caption = "a black dog";
  bad.objects[2].caption = "a black tree";
  EnvGuard stub("PNI_LLM_STUB", write_stub({worked_answer(bad)}).c_str());
  const CliResult r = run({"edit", path("scene.json"), kBlackDog, "--out", path("out.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out_json()["ok"], false);
  EXPECT_TRUE(r.out_json().contains("proposed_layout"));
  EXPECT_FALSE(std::filesystem::exists(tmp_ / "out.json"));
}

TEST_F(CliTest, ReplayThreeOracleSteps) {
  write_file_atomic(tmp_ / "script.txt",
                    "# three edits\n"
                    "layout scene.json\n"
                    "edit move {x: 150, y: 400, width: 100, height: 100} to {x: 144, y: 132}\n"
                    "\n"
                    "edit add an apple at {x: 256, y: 256}\n"
                    "edit recaption {x: 330, y: 420, width: 50, height: 50} to a red ball\n");
  const CliResult r = run({"replay", path("script.txt")});
  EXPECT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::vector<Json> rows;
  for (std::string line; std::getline(lines, line);) rows.push_back(Json::parse(line));
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0]["step"], 1);
  EXPECT_EQ(rows[0]["line"], 3);
  EXPECT_EQ(rows[3]["summary"], Json({{"steps", 3}, {"ok", 3}, {"failed", 0}}));
  const Layout last = layout_from_json(rows[2]["layout"]);
  EXPECT_EQ(last.objects.size(), 4u);
  EXPECT_EQ(last.objects[0].box.x, 94);
}

TEST_F(CliTest, ReplayProseOnlyStubFailsOneStep) {
  EnvGuard stub("PNI_LLM_STUB", write_stub({testing::kProseOnly}).c_str());
  write_file_atomic(tmp_ / "script.txt",
                    "layout scene.json\n"
                    "edit move {x: 150, y: 400, width: 100, height: 100} to {x: 144, y: 132}\n"
                    "edit make the dog in {x: 84, y: 72, width: 120, height: 120} black\n"
                    "edit delete {x: 20, y: 20, width: 120, height: 300}\n");
  const CliResult r = run({"replay", path("script.txt")});
  EXPECT_EQ(r.code, 1);
  std::istringstream lines(r.out);
  std::vector<Json> rows;
  for (std::string line; std::getline(lines, line);) rows.push_back(Json::parse(line));
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[1]["ok"], false);
  EXPECT_EQ(rows[1]["error"]["code"], "no-layout-found");
  EXPECT_EQ(rows[3]["summary"], Json({{"steps", 3}, {"ok", 2}, {"failed", 1}}));
}

TEST_F(CliTest, ReplayScriptErrors) {
  write_file_atomic(tmp_ / "empty.txt", "# nothing here\n\n");
  const CliResult empty = run({"replay", path("empty.txt")});
  EXPECT_EQ(empty.code, 1);
  EXPECT_EQ(empty.err_json()["error"]["message"], "no layout line");
  write_file_atomic(tmp_ / "early.txt", "edit delete {x: 1, y: 1}\nlayout scene.json\n");
  EXPECT_EQ(run({"replay", path("early.txt")}).code, 1);
  write_file_atomic(tmp_ / "twice.txt", "layout scene.json\nlayout scene.json\n");
  EXPECT_NE(run({"replay", path("twice.txt")}).err.find("line 2"), std::string::npos);
}

TEST_F(CliTest, ReplayEnvironmentErrorAbortsWithStep) {
  write_file_atomic(tmp_ / "script.txt",
                    "layout scene.json\n"
                    "edit move {x: 150, y: 400, width: 100, height: 100} to {x: 144, y: 132}\n"
                    "edit make it nicer\n"
                    "edit add an apple at {x: 256, y: 256}\n");
  const CliResult r = run({"replay", path("script.txt")});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.err_json()["error"]["step"], 2);
}

TEST_F(CliTest, Validate) {
  EXPECT_EQ(run({"validate", path("scene.json")}).code, 0);
  write_file_atomic(tmp_ / "dup.json",
                    R"({"canvas": {"width": 64, "height": 64}, "background": "", "objects": [
                      {"id": 1, "caption": "a", "box": {"x": 0, "y": 0, "width": 8, "height": 8}},
                      {"id": 1, "caption": "b", "box": {"x": 8, "y": 8, "width": 8, "height": 8}}]})");
  const CliResult dup = run({"validate", path("dup.json")});
  EXPECT_EQ(dup.code, 1);
  EXPECT_EQ(dup.out_json()["ok"], false);
  EXPECT_EQ(run({"validate", path("nope.json")}).code, 2);
  write_file_atomic(tmp_ / "broken.json", "{\"canvas\": ");
  EXPECT_EQ(run({"validate", path("broken.json")}).code, 1);
}

TEST_F(CliTest, RenderMock) {
  const CliResult r = run({"render", path("scene.json"), "--out", path("scene.svg")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out_json()["media_type"], "image/svg+xml");
  EXPECT_EQ(r.out_json()["layout_hash"], layout_hash(white_dog_scene()));
  EXPECT_EQ(read_text_file(tmp_ / "scene.svg"), render_svg(white_dog_scene()));
  EXPECT_EQ(run({"render", path("scene.json"), "--out", path("x.png"), "--backend", "diffusion"})
                .code,
            2);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"edit"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, CliAndServiceAgree) {
  Layout black = white_dog_scene();
  black.objects[0].caption = "a black dog";
  const std::string stub_path = write_stub({worked_answer(black)});
  EnvGuard stub("PNI_LLM_STUB", stub_path.c_str());
  for (const char* instruction : {kDogMove, kBlackDog}) {
    const CliResult r = run({"edit", path("scene.json"), instruction, "--out", path("cli.json")});
    ASSERT_EQ(r.code, 0) << r.err;

    ServiceConfig config = load_config(std::nullopt);
    config.server.data_dir = tmp_ / "sessions";
    auto service = EditService::from_config(config);
    const std::string id = service->create_session(white_dog_scene());
    service->apply_instruction(id, parse_instruction_text(instruction));
    EXPECT_EQ(serialize_layout(service->get(id).current), read_text_file(tmp_ / "cli.json"))
        << instruction;
  }
}

// The real binary, for behavior that needs a process.
class ServeTest : public CliTest {
 protected:
  std::vector<std::string> serve_args(const std::string& port) {
    return {PNI_CLI_PATH, "serve", "--port", port, "--data-dir", path("data")};
  }
};

TEST_F(ServeTest, HealthAnswersAndSignalStops) {
  testing::Child child(serve_args("0"));
  const auto line = child.read_line(std::chrono::seconds(10));
  ASSERT_TRUE(line);
  const int port = testing::listening_port(*line);
  ASSERT_GT(port, 0) << *line;
  httplib::Client client("127.0.0.1", port);
  auto res = client.Get("/v1/health");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(Json::parse(res->body)["status"], "ok");
  child.signal(SIGTERM);
  EXPECT_EQ(child.wait(), 0);
}

TEST_F(ServeTest, PortInUseExitsTwo) {
  testing::Child first(serve_args("0"));
  const auto line = first.read_line(std::chrono::seconds(10));
  ASSERT_TRUE(line);
  const std::string port = std::to_string(testing::listening_port(*line));
  testing::Child second(serve_args(port));
  EXPECT_EQ(second.wait(), 2);
}

TEST_F(ServeTest, MissingCorpusExitsTwoNamingPath) {
  write_file_atomic(tmp_ / "config.json",
                    R"({"prompting": {"corpus_path": "no/such/corpus.json"}})");
  std::vector<std::string> args = serve_args("0");
  args.push_back("--config");
  args.push_back(path("config.json"));
  args.push_back("--json");
  // Exit code from the binary; the message from an in-process run.
  testing::Child child(args);
  EXPECT_EQ(child.wait(), 2);
  const CliResult r = run({"serve", "--config", path("config.json"), "--port", "0"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find((tmp_ / "no/such/corpus.json").string()), std::string::npos) << r.err;
}

}  // namespace
}  // namespace pni
