// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#include <set>

#include <gtest/gtest.h>

#include "pni/error.hpp"
#include "pni/io.hpp"
#include "pni/layout_text.hpp"
#include "pni/oracle.hpp"
#include "pni/prompt.hpp"
#include "pni/validator.hpp"
#include "pni/wire.hpp"
#include "support/paths.hpp"

namespace pni {
namespace {

const ExampleCorpus& corpus() {
  static const ExampleCorpus c = load_corpus(testing::default_corpus_path());
  return c;
}

Layout query_layout() {
  Layout l;
  l.background = "a park";
  l.objects = {{0, "a white dog", {150, 400, 100, 100}}};
  return l;
}

Error corpus_error(const std::string& text) {
  try {
    parse_corpus(text);
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "corpus accepted";
  return Error(ErrorCode::kInvalidArgument, "none");
}

TEST(CorpusTest, DefaultCorpusLoads) {
  EXPECT_EQ(corpus().examples.size(), 15u);
  EXPECT_EQ(corpus().version, "1");
  EXPECT_GE(corpus().scene_examples.size(), 1u);
  EXPECT_EQ(default_prompt_examples(corpus()), 15u);
  for (const auto& ex : corpus().examples) {
    ASSERT_EQ(ex.chain_of_thought.size(), 3u);
    EXPECT_EQ(ex.chain_of_thought[0].question, "Which object ids does each drawn shape select?");
    EXPECT_EQ(ex.chain_of_thought[1].question, "What operation does the instruction request?");
    EXPECT_EQ(ex.chain_of_thought[2].question, "What is the new box/caption for each affected object?");
    EXPECT_EQ(serialize_layout(parse_layout(ex.layout_text)), ex.layout_text);
  }
}

TEST(CorpusTest, CoversEveryOperation) {
  std::set<std::string> kinds;
  int free_form = 0;
  for (const auto& ex : corpus().examples) {
    if (auto cmd = try_parse_command(parse_instruction_text(ex.instruction_text))) {
      kinds.insert(std::string(command_kind_name(cmd->kind)));
    } else {
      ++free_form;
    }
  }
  EXPECT_EQ(kinds, (std::set<std::string>{"add", "delete", "move", "recaption"}));
  EXPECT_GE(free_form, 4);
}

// Every example must pass the validator, and examples the interpreter
// understands must match it exactly.
TEST(CorpusTest, ExamplesAgreeWithValidatorAndOracle) {
  for (std::size_t i = 0; i < corpus().examples.size(); ++i) {
    const auto& ex = corpus().examples[i];
    const Layout before = parse_layout(ex.layout_text);
    const Layout after = parse_layout(ex.output_layout_text);
    const auto instr = parse_instruction_text(ex.instruction_text);
    const auto report = validate_edit(before, after, instr);
    EXPECT_TRUE(report.ok) << i << ": " << report_to_json(report).dump();
    if (auto cmd = try_parse_command(instr)) {
      EXPECT_EQ(apply_command(before, *cmd), after) << i;
    }
  }
}

TEST(CorpusTest, TooSmall) {
  std::string one = read_text_file(testing::default_corpus_path());
  Json j = Json::parse(one);
  j["examples"] = Json::array({j["examples"][0]});
  const Error e = corpus_error(j.dump());
  EXPECT_EQ(e.code(), ErrorCode::kCorpus);
  EXPECT_NE(std::string(e.what()).find("corpus too small"), std::string::npos);
}

TEST(CorpusTest, BadExampleIsNamedByIndex) {
  Json j = Json::parse(read_text_file(testing::default_corpus_path()));
  j["examples"][3]["output_layout"] = "{\"canvas\": ";
  const Error e = corpus_error(j.dump());
  EXPECT_NE(std::string(e.what()).find("corpus example 3: output layout"), std::string::npos)
      << e.what();

  j = Json::parse(read_text_file(testing::default_corpus_path()));
  j["examples"][5]["chain_of_thought"] = Json::array();
  EXPECT_NE(std::string(corpus_error(j.dump()).what()).find("corpus example 5"), std::string::npos);
}

TEST(CorpusTest, BareArrayAccepted) {
  Json j = Json::parse(read_text_file(testing::default_corpus_path()));
  const ExampleCorpus bare = parse_corpus(j["examples"].dump());
  EXPECT_EQ(bare.examples, corpus().examples);
  EXPECT_TRUE(bare.scene_examples.empty());
}

TEST(CorpusTest, MissingFileIsIoError) {
  try {
    load_corpus("/nonexistent/corpus.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
    EXPECT_NE(std::string(e.what()).find("/nonexistent/corpus.json"), std::string::npos);
  }
}

TEST(BuildPromptTest, TurnCounts) {
  const auto instr = parse_instruction_text("make the dog in {x: 150, y: 400, width: 100, height: 100} black");
  EXPECT_EQ(build_prompt(corpus(), query_layout(), instr, 15).turns.size(), 31u);
  EXPECT_EQ(build_prompt(corpus(), query_layout(), instr, 1).turns.size(), 3u);
  EXPECT_THROW(build_prompt(corpus(), query_layout(), instr, 0), Error);
  EXPECT_THROW(build_prompt(corpus(), query_layout(), instr, 16), Error);
}

TEST(BuildPromptTest, AlternatesAndEndsWithQuery) {
  const auto instr = parse_instruction_text("move {x: 150, y: 400, width: 100, height: 100} to {x: 144, y: 132}");
  const auto p = build_prompt(corpus(), query_layout(), instr, 4);
  for (std::size_t i = 0; i < p.turns.size(); ++i) {
    EXPECT_EQ(p.turns[i].role, i % 2 == 0 ? Role::kUser : Role::kAssistant);
  }
  EXPECT_EQ(p.turns.back().content,
            "INPUT LAYOUT:\n" + serialize_layout(query_layout()) +
                "\nINSTRUCTION:\nmove {x: 150, y: 400, width: 100, height: 100} to {x: 144, y: 132}");
  EXPECT_NE(p.system_text.find("OUTPUT LAYOUT:"), std::string::npos);
}

TEST(BuildPromptTest, AssistantTurnFraming) {
  const auto instr = parse_instruction_text("hello");
  const auto p = build_prompt(corpus(), query_layout(), instr, 1);
  const auto& ex = corpus().examples[0];
  std::string expected;
  for (const auto& qa : ex.chain_of_thought) expected += "Q: " + qa.question + "\nA: " + qa.answer + "\n";
  expected += "OUTPUT LAYOUT:\n" + ex.output_layout_text;
  EXPECT_EQ(p.turns[1].content, expected);
}

TEST(BuildPromptTest, DeterministicAndMonotone) {
  const auto instr = parse_instruction_text("delete {x: 150, y: 400, width: 100, height: 100}");
  std::size_t last = 0;
  for (std::size_t k = 1; k <= corpus().examples.size(); ++k) {
    const auto a = build_prompt(corpus(), query_layout(), instr, k);
    EXPECT_EQ(a, build_prompt(corpus(), query_layout(), instr, k));
    EXPECT_GE(a.size(), last);
    last = a.size();
  }
}

TEST(ParseCompletionTest, SelfConsistencyOverCorpus) {
  const auto instr = parse_instruction_text("hello");
  const auto p = build_prompt(corpus(), query_layout(), instr, corpus().examples.size());
  for (std::size_t i = 0; i < corpus().examples.size(); ++i) {
    const auto& ex = corpus().examples[i];
    const auto parsed = parse_completion(p.turns[2 * i + 1].content);
    EXPECT_EQ(parsed.chain_of_thought, ex.chain_of_thought) << i;
    EXPECT_EQ(parsed.layout, parse_layout(ex.output_layout_text)) << i;
  }
}

TEST(ParseCompletionTest, NoQuestions) {
  const auto parsed = parse_completion("OUTPUT LAYOUT:\n" + serialize_layout(query_layout()));
  EXPECT_TRUE(parsed.chain_of_thought.empty());
  EXPECT_EQ(parsed.layout, query_layout());
}

TEST(ParseCompletionTest, ToleratesChatter) {
  const std::string text = "Sure.\nQ: first?\nsome musing\nA: yes\nQ: dangling?\nQ: second?\n  A:  no \n" +
                           serialize_layout(query_layout());
  const auto parsed = parse_completion(text);
  EXPECT_EQ(parsed.chain_of_thought,
            (std::vector<QaPair>{{"first?", "yes"}, {"second?", "no"}}));
  EXPECT_EQ(parsed.layout, query_layout());
}

TEST(ParseCompletionTest, ProseOnly) {
  try {
    parse_completion("I would rather not.");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoLayoutFound);
  }
}

TEST(ParseCompletionTest, InvalidLayoutPropagates) {
  try {
    parse_completion("OUTPUT LAYOUT:\n{\"canvas\": {\"width\": 512, \"height\": 512}, \"objects\": []}");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchema);
  }
}

TEST(CorrectionTest, AppendsRejectedAnswerAndFailures) {
  const auto instr = parse_instruction_text("hello");
  const auto base = build_prompt(corpus(), query_layout(), instr, 2);
  const auto fixed = with_correction(base, "nope", {"no layout found in completion"});
  ASSERT_EQ(fixed.turns.size(), base.turns.size() + 2);
  EXPECT_EQ(fixed.turns[base.turns.size()], (Turn{Role::kAssistant, "nope"}));
  EXPECT_EQ(fixed.turns.back().role, Role::kUser);
  EXPECT_NE(fixed.turns.back().content.find("- no layout found in completion\n"), std::string::npos);
}

TEST(ScenePromptTest, Framing) {
  const auto p = build_scene_prompt(corpus(), "  a table with three oranges ", Canvas{});
  EXPECT_EQ(p.turns.size(), 2 * corpus().scene_examples.size() + 1);
  EXPECT_EQ(p.turns.back().content, "SCENE: a table with three oranges\nCANVAS: 512x512");
  EXPECT_TRUE(p.turns[1].content.starts_with("OUTPUT LAYOUT:\n{"));
  EXPECT_THROW(build_scene_prompt(corpus(), "  ", Canvas{}), Error);
}

}  // namespace
}  // namespace pni
