// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "pni/oracle.hpp"
#include "pni/validator.hpp"
#include "pni/wire.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace pni {
namespace {

Layout balls() {
  Layout l;
  l.background = "a lawn";
  l.objects = {{0, "a red ball", {40, 40, 60, 60}},
               {1, "a blue ball", {300, 40, 60, 60}},
               {2, "a white dog", {150, 300, 120, 100}}};
  return l;
}

const ValidationCheck& check(const ValidationReport& r, std::string_view rule) {
  const ValidationCheck* c = r.find(rule);
  if (!c) throw std::runtime_error("missing rule " + std::string(rule));
  return *c;
}

TEST(ValidateStructureTest, ValidLayoutPassesEveryRule) {
  const auto r = validate_structure(balls());
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.checks.size(), 5u);
  for (const auto& c : r.checks) EXPECT_TRUE(c.passed) << c.rule_id;
}

TEST(ValidateStructureTest, DuplicateIds) {
  Layout l = balls();
  l.objects[1].id = 0;
  const auto r = validate_structure(l);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.failed_rules(), std::vector<std::string>{"unique-ids"});
  EXPECT_EQ(check(r, "unique-ids").detail, "duplicate id 0");
}

TEST(ValidateStructureTest, ClampPolicyOnReportsClampedObject) {
  Layout l = balls();
  l.objects[2].box = {480, 300, 120, 100};
  const auto r = validate_structure(l);
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(check(r, "in-canvas").detail, "clamped object 2");

  const ClampResult clamped = clamp_layout(l);
  EXPECT_EQ(clamped.clamped, std::vector<ObjectId>{2});
  // The minimal-shift search must agree with the clamp.
  const auto placed = testing::nearest_placement({480, 300, 120, 100}, 512, 512);
  ASSERT_TRUE(placed);
  EXPECT_EQ(clamped.layout.objects[2].box, (BoundingBox{placed->first, placed->second, 120, 100}));
}

TEST(ValidateStructureTest, ClampPolicyOffFails) {
  Layout l = balls();
  l.objects[2].box = {-3, 300, 120, 100};
  const auto r = validate_structure(l, {.epsilon_fraction = 0.05, .clamp_policy = false});
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.failed_rules(), std::vector<std::string>{"in-canvas"});
}

TEST(ValidateStructureTest, OversizeFailsEvenWithClamp) {
  Layout l = balls();
  l.objects[0].box = {0, 0, 600, 10};
  EXPECT_EQ(validate_structure(l).failed_rules(), std::vector<std::string>{"in-canvas"});
}

TEST(ValidateStructureTest, BlankCaptionAndDegenerateBox) {
  Layout l = balls();
  l.objects[0].caption = "  ";
  l.objects[1].box.height = 0;
  const auto r = validate_structure(l);
  EXPECT_EQ(r.failed_rules(), (std::vector<std::string>{"positive-box", "non-empty-caption"}));
  EXPECT_EQ(r.failure_count(), 2u);

  Layout tiny;
  tiny.canvas = {8, 512};
  EXPECT_EQ(validate_structure(tiny).failed_rules(), std::vector<std::string>{"canvas-size"});
}

TEST(ValidateEditTest, OracleMoveAgreesWithItself) {
  const Layout before = balls();
  const auto instr = parse_instruction_text(
      "move {x: 35, y: 35, width: 70, height: 70} to {x: 400, y: 400}");
  const Layout after = apply_command(before, parse_command(instr));
  const auto r = validate_edit(before, after, instr);
  EXPECT_TRUE(r.ok);
  EXPECT_TRUE(check(r, "oracle").passed);
}

TEST(ValidateEditTest, MovedTheWrongBall) {
  const Layout before = balls();
  const auto instr = parse_instruction_text(
      "make the ball in {x: 35, y: 35, width: 70, height: 70} black");
  Layout after = before;
  after.objects[1].caption = "a black ball";
  const auto r = validate_edit(before, after, instr);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.failed_rules(), std::vector<std::string>{"frame"});
  EXPECT_EQ(check(r, "frame").detail, "object 1 changed");
  EXPECT_EQ(r.find("oracle"), nullptr);

  Layout right = before;
  right.objects[0].caption = "a black ball";
  EXPECT_TRUE(validate_edit(before, right, instr).ok);
}

TEST(ValidateEditTest, CanvasResized) {
  const Layout before = balls();
  Layout after = before;
  after.canvas = {1024, 512};
  const auto r = validate_edit(before, after, parse_instruction_text("make it wider"));
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.failed_rules(), std::vector<std::string>{"canvas-fixed"});
}

TEST(ValidateEditTest, FrameIsVacuousWithoutShapes) {
  const Layout before = balls();
  Layout after = before;
  after.objects[0].caption = "a green ball";
  after.objects[2].box.x += 10;
  const auto r = validate_edit(before, after, parse_instruction_text("make everything greener"));
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(check(r, "frame").detail, "not applicable: instruction has no shapes");
}

TEST(ValidateEditTest, BackgroundIsAdvisory) {
  const Layout before = balls();
  Layout after = before;
  after.background = "a snowy lawn";
  const auto mentioned = validate_edit(before, after, parse_instruction_text("make the background snowy"));
  EXPECT_TRUE(mentioned.ok);
  EXPECT_EQ(check(mentioned, "background").detail,
            "background changed; instruction mentions the background");
  const auto silent = validate_edit(
      before, after, parse_instruction_text("make the dog in {x: 150, y: 300, width: 120, height: 100} black"));
  EXPECT_TRUE(check(silent, "background").passed);
  EXPECT_NE(check(silent, "background").detail.find("advisory"), std::string::npos);
}

TEST(ValidateEditTest, IdReuseIsRejected) {
  Layout before = balls();
  before.objects.push_back({7, "a cone", {400, 400, 20, 20}});
  Layout after = before;
  after.objects.push_back({5, "a hat", {10, 400, 20, 20}});
  const auto r = validate_edit(before, after, parse_instruction_text("add a hat somewhere"));
  EXPECT_EQ(r.failed_rules(), std::vector<std::string>{"id-fresh"});
  after.objects.back().id = 8;
  EXPECT_TRUE(validate_edit(before, after, parse_instruction_text("add a hat somewhere")).ok);
}

TEST(ValidateEditTest, MoveToleranceIsFivePercentOfCanvas) {
  const Layout before = balls();
  const auto instr = parse_instruction_text(
      "move {x: 35, y: 35, width: 70, height: 70} to {x: 400, y: 400}");
  Layout after = apply_command(before, parse_command(instr));
  // epsilon = 0.05 * 512 = 25.6 px.
  after.objects[0].box.x += 25;
  EXPECT_TRUE(validate_edit(before, after, instr).ok);
  after.objects[0].box.x += 1;
  const auto r = validate_edit(before, after, instr);
  EXPECT_EQ(r.failed_rules(), std::vector<std::string>{"oracle"});

  Layout resized = apply_command(before, parse_command(instr));
  resized.objects[0].box.width += 1;
  EXPECT_EQ(validate_edit(before, resized, instr).failed_rules(), std::vector<std::string>{"oracle"});
}

TEST(ValidateEditTest, RecaptionMustMatchExactly) {
  const Layout before = balls();
  const auto instr = parse_instruction_text(
      "recaption {x: 150, y: 300, width: 120, height: 100} to a black dog");
  Layout after = before;
  after.objects[2].caption = "a black dog.";
  EXPECT_EQ(validate_edit(before, after, instr).failed_rules(), std::vector<std::string>{"oracle"});
  after.objects[2].caption = "a black dog";
  EXPECT_TRUE(validate_edit(before, after, instr).ok);
}

TEST(ValidateEditTest, OracleCannotApply) {
  const Layout before = balls();
  const auto instr = parse_instruction_text("delete {x: 450, y: 450, width: 10, height: 10}");
  const auto r = validate_edit(before, before, instr);
  EXPECT_EQ(r.failed_rules(), std::vector<std::string>{"oracle"});
  EXPECT_NE(check(r, "oracle").detail.find("selection resolves to no object"), std::string::npos);
}

TEST(ValidateEditTest, AddChecksCaptionAndPlacement) {
  const Layout before = balls();
  const auto instr = parse_instruction_text("add a red apple at {x: 256, y: 256}");
  Layout after = before;
  after.objects.push_back({3, "a red apple", {200, 190, 128, 128}});
  EXPECT_TRUE(validate_edit(before, after, instr).ok);
  after.objects.back().caption = "an apple";
  EXPECT_EQ(validate_edit(before, after, instr).failed_rules(), std::vector<std::string>{"oracle"});
}

TEST(ValidationReportTest, JsonRoundTrip) {
  Layout l = balls();
  l.objects[1].id = 0;
  const auto r = validate_structure(l);
  const Json j = report_to_json(r);
  EXPECT_EQ(j["ok"], false);
  EXPECT_EQ(j["checks"][0].dump(), R"({"rule_id":"canvas-size","passed":true,"detail":""})");
  EXPECT_EQ(report_from_json(j), r);
}

TEST(ValidatorPropertyTest, OracleSoundness) {
  testing::Gen g(0x5afe);
  for (int i = 0; i < 800; ++i) {
    const Layout before = g.layout();
    const auto instr = testing::random_oracle_instruction(g, before);
    const Layout after = apply_command(before, parse_command(instr));
    const auto r = validate_edit(before, after, instr);
    ASSERT_TRUE(r.ok) << report_to_json(r).dump() << "\n" << serialize_instruction(instr);
    ASSERT_NE(r.find("oracle"), nullptr);
    ASSERT_EQ(validate_edit(before, after, instr), r);
  }
}

TEST(ValidatorPropertyTest, AnyFailureMeansNotOk) {
  testing::Gen g(0xbad);
  for (int i = 0; i < 400; ++i) {
    Layout before = g.layout();
    if (before.objects.empty()) continue;
    Layout after = before;
    auto& victim = after.objects[static_cast<std::size_t>(
        g.range(0, static_cast<std::int64_t>(after.objects.size()) - 1))];
    switch (g.range(0, 3)) {
      case 0: victim.caption = ""; break;
      case 1: victim.box.width = 0; break;
      case 2: after.canvas.width += 1; break;
      default: after.objects.push_back(victim); break;
    }
    const auto r = validate_edit(before, after, parse_instruction_text("tidy up"));
    ASSERT_FALSE(r.ok);
    ASSERT_GE(r.failure_count(), 1u);
  }
}

}  // namespace
}  // namespace pni
