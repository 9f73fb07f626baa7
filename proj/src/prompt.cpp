// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#include "pni/prompt.hpp"

#include <fmt/format.h>

#include "pni/error.hpp"
#include "pni/io.hpp"
#include "pni/layout_text.hpp"
#include "pni/wire.hpp"
#include "text_util.hpp"

namespace pni {

namespace {

constexpr std::string_view kEditSystemText =
    "You edit image layouts. A layout is a JSON object with the keys \"canvas\" "
    "({\"width\", \"height\"}), \"background\" (a caption of the scene behind the objects) and "
    "\"objects\", a list of {\"id\", \"caption\", \"box\": {\"x\", \"y\", \"width\", \"height\"}}. "
    "Coordinates are integer pixels; the origin is the top-left corner and y grows downward.\n"
    "Each request gives an INPUT LAYOUT and an INSTRUCTION. Shapes the user drew appear inline "
    "in the instruction as {x: X, y: Y} (a point), {x: X, y: Y, width: W, height: H} (a box) or "
    "{from: {x: X, y: Y}, to: {x: X, y: Y}} (an arrow).\n"
    "First answer each question on a line starting with \"Q: \" followed by a line starting "
    "with \"A: \". Then write the line \"OUTPUT LAYOUT:\" followed by the complete edited layout "
    "as JSON and nothing after it. Keep every object the instruction does not touch exactly as "
    "it was, keep the canvas unchanged, and give new objects ids larger than every existing id.";

constexpr std::string_view kSceneSystemText =
    "You draft image layouts from a scene description. A layout is a JSON object with the keys "
    "\"canvas\" ({\"width\", \"height\"}), \"background\" (a caption of the scene behind the "
    "objects) and \"objects\", a list of {\"id\", \"caption\", \"box\": {\"x\", \"y\", \"width\", "
    "\"height\"}}. Coordinates are integer pixels; the origin is the top-left corner and y grows "
    "downward.\n"
    "Each request gives a SCENE and a CANVAS size. Write the line \"OUTPUT LAYOUT:\" followed by "
    "a layout for that scene on that canvas, with ids counting up from 0, every box inside the "
    "canvas, and nothing after the layout.";

[[noreturn]] void corpus_fail(std::string message, std::string detail = {}) {
  throw Error(ErrorCode::kCorpus, std::move(message), std::move(detail));
}

std::string canonical_layout(const Json& value, std::string_view where) {
  try {
    if (value.is_string()) return serialize_layout(parse_layout(value.get<std::string>()));
    return serialize_layout(layout_from_json(value, /*check_invariants=*/true));
  } catch (const Error& e) {
    corpus_fail(fmt::format("{}: {}", where, e.what()), std::string(e.code_name()));
  }
}

std::string required_string(const Json& obj, const char* key, std::string_view where) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    corpus_fail(fmt::format("{}: '{}' must be a string", where, key), "schema");
  }
  return it->get<std::string>();
}

bool single_line(std::string_view s) {
  return !detail::trim(s).empty() && detail::trim(s) == s && s.find('\n') == std::string::npos &&
         s.find('\r') == std::string::npos;
}

InContextExample parse_example(const Json& item, std::size_t index) {
  const std::string where = fmt::format("corpus example {}", index);
  if (!item.is_object()) corpus_fail(where + ": must be an object", "schema");
  InContextExample ex;

  auto layout = item.find("layout");
  if (layout == item.end()) corpus_fail(where + ": missing 'layout'", "schema");
  ex.layout_text = canonical_layout(*layout, where + ": layout");

  const std::string instruction = required_string(item, "instruction", where);
  try {
    ex.instruction_text = serialize_instruction(parse_instruction_text(instruction));
  } catch (const Error& e) {
    corpus_fail(fmt::format("{}: instruction: {}", where, e.what()), std::string(e.code_name()));
  }

  auto cot = item.find("chain_of_thought");
  if (cot == item.end() || !cot->is_array() || cot->empty()) {
    corpus_fail(where + ": 'chain_of_thought' must be a non-empty array", "schema");
  }
  for (const auto& qa : *cot) {
    if (!qa.is_object()) corpus_fail(where + ": chain_of_thought entries must be objects", "schema");
    QaPair pair{required_string(qa, "q", where), required_string(qa, "a", where)};
    if (!single_line(pair.question) || !single_line(pair.answer)) {
      corpus_fail(where + ": questions and answers must be single trimmed lines", "schema");
    }
    ex.chain_of_thought.push_back(std::move(pair));
  }

  auto out = item.find("output_layout");
  if (out == item.end()) corpus_fail(where + ": missing 'output_layout'", "schema");
  ex.output_layout_text = canonical_layout(*out, where + ": output layout");
  return ex;
}

SceneExample parse_scene(const Json& item, std::size_t index) {
  const std::string where = fmt::format("scene example {}", index);
  if (!item.is_object()) corpus_fail(where + ": must be an object", "schema");
  SceneExample scene;
  scene.caption = required_string(item, "caption", where);
  if (!single_line(scene.caption)) corpus_fail(where + ": caption must be one trimmed line", "schema");
  auto layout = item.find("layout");
  if (layout == item.end()) corpus_fail(where + ": missing 'layout'", "schema");
  scene.layout_text = canonical_layout(*layout, where + ": layout");
  return scene;
}

}  // namespace

std::string_view edit_system_text() { return kEditSystemText; }
std::string_view scene_system_text() { return kSceneSystemText; }

ExampleCorpus parse_corpus(std::string_view text) {
  Json json;
  try {
    json = Json::parse(text.begin(), text.end());
  } catch (const Json::exception& e) {
    corpus_fail(fmt::format("corpus is not valid JSON: {}", e.what()), "json-syntax");
  }
  ExampleCorpus corpus;
  const Json* examples = &json;
  if (json.is_object()) {
    auto version = json.find("version");
    if (version != json.end()) {
      if (!version->is_string()) corpus_fail("corpus 'version' must be a string", "schema");
      corpus.version = version->get<std::string>();
    }
    auto ex = json.find("examples");
    if (ex == json.end()) corpus_fail("corpus is missing 'examples'", "schema");
    examples = &*ex;
    if (auto scenes = json.find("scene_examples"); scenes != json.end()) {
      if (!scenes->is_array()) corpus_fail("corpus 'scene_examples' must be an array", "schema");
      for (std::size_t i = 0; i < scenes->size(); ++i) {
        corpus.scene_examples.push_back(parse_scene((*scenes)[i], i));
      }
    }
  }
  if (!examples->is_array()) corpus_fail("corpus examples must be an array", "schema");
  if (examples->size() < kMinCorpusExamples) {
    corpus_fail(fmt::format("corpus too small: {} examples, need at least {}", examples->size(),
                            kMinCorpusExamples),
                "corpus-too-small");
  }
  if (examples->size() > kMaxCorpusExamples) {
    corpus_fail(fmt::format("corpus too large: {} examples, at most {}", examples->size(),
                            kMaxCorpusExamples),
                "corpus-too-large");
  }
  for (std::size_t i = 0; i < examples->size(); ++i) {
    corpus.examples.push_back(parse_example((*examples)[i], i));
  }
  return corpus;
}

ExampleCorpus load_corpus(const std::filesystem::path& path) {
  return parse_corpus(read_text_file(path));
}

std::size_t default_prompt_examples(const ExampleCorpus& corpus) {
  return std::min(kDefaultPromptExamples, corpus.examples.size());
}

std::string_view role_name(Role role) { return role == Role::kUser ? "user" : "assistant"; }

std::size_t PromptBundle::size() const {
  std::size_t n = system_text.size();
  for (const auto& t : turns) n += t.content.size();
  return n;
}

std::string format_edit_request(std::string_view layout_text, std::string_view instruction_text) {
  return fmt::format("{}\n{}\n{}\n{}", kInputLayoutLabel, layout_text, kInstructionLabel,
                     instruction_text);
}

std::string format_edit_answer(const std::vector<QaPair>& chain_of_thought,
                               std::string_view layout_text) {
  std::string out;
  for (const auto& qa : chain_of_thought) {
    out += fmt::format("{}{}\n{}{}\n", kQuestionPrefix, qa.question, kAnswerPrefix, qa.answer);
  }
  out += fmt::format("{}\n{}", kOutputLayoutSentinel, layout_text);
  return out;
}

PromptBundle build_prompt(const ExampleCorpus& corpus, const Layout& layout,
                          const MultimodalInstruction& instruction, std::size_t k) {
  if (k < 1 || k > corpus.examples.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("k must be between 1 and {}, got {}", corpus.examples.size(), k));
  }
  PromptBundle prompt{std::string(kEditSystemText), {}};
  prompt.turns.reserve(2 * k + 1);
  for (std::size_t i = 0; i < k; ++i) {
    const auto& ex = corpus.examples[i];
    prompt.turns.push_back({Role::kUser, format_edit_request(ex.layout_text, ex.instruction_text)});
    prompt.turns.push_back(
        {Role::kAssistant, format_edit_answer(ex.chain_of_thought, ex.output_layout_text)});
  }
  prompt.turns.push_back(
      {Role::kUser, format_edit_request(serialize_layout(layout), serialize_instruction(instruction))});
  return prompt;
}

PromptBundle build_scene_prompt(const ExampleCorpus& corpus, std::string_view caption,
                                const Canvas& canvas) {
  if (detail::trim(caption).empty()) {
    throw Error(ErrorCode::kInvalidArgument, "scene prompt is empty");
  }
  if (corpus.scene_examples.empty()) corpus_fail("corpus has no scene examples", "no-scene-examples");
  auto request = [](std::string_view text, std::int64_t w, std::int64_t h) {
    return fmt::format("{} {}\n{} {}x{}", kSceneLabel, text, kCanvasLabel, w, h);
  };
  PromptBundle prompt{std::string(kSceneSystemText), {}};
  for (const auto& scene : corpus.scene_examples) {
    const Layout l = parse_layout(scene.layout_text);
    prompt.turns.push_back({Role::kUser, request(scene.caption, l.canvas.width, l.canvas.height)});
    prompt.turns.push_back(
        {Role::kAssistant, fmt::format("{}\n{}", kOutputLayoutSentinel, scene.layout_text)});
  }
  prompt.turns.push_back(
      {Role::kUser, request(detail::trim(caption), canvas.width, canvas.height)});
  return prompt;
}

PromptBundle with_correction(PromptBundle prompt, std::string_view rejected_completion,
                             const std::vector<std::string>& failures) {
  std::string text = "Your previous answer was rejected:\n";
  for (const auto& f : failures) text += fmt::format("- {}\n", f);
  text += fmt::format(
      "Answer the same request again. End with the line \"{}\" followed by the complete "
      "layout as JSON.",
      kOutputLayoutSentinel);
  prompt.turns.push_back({Role::kAssistant, std::string(rejected_completion)});
  prompt.turns.push_back({Role::kUser, std::move(text)});
  return prompt;
}

std::vector<QaPair> parse_chain_of_thought(std::string_view completion) {
  std::vector<QaPair> out;
  std::optional<std::string> question;
  std::size_t start = 0;
  while (start <= completion.size()) {
    std::size_t end = completion.find('\n', start);
    if (end == std::string_view::npos) end = completion.size();
    const std::string_view line = detail::trim(completion.substr(start, end - start));
    start = end + 1;
    if (line.starts_with(kOutputLayoutSentinel)) break;
    if (line.starts_with("Q:")) {
      question = std::string(detail::trim(line.substr(2)));
    } else if (line.starts_with("A:") && question) {
      out.push_back({std::move(*question), std::string(detail::trim(line.substr(2)))});
      question.reset();
    }
  }
  return out;
}

ParsedCompletion parse_completion(std::string_view completion) {
  const std::string block = extract_layout_block(completion);
  return {parse_chain_of_thought(completion), parse_layout(block)};
}

}  // namespace pni
