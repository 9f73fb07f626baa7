// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pni/instruction.hpp"
#include "pni/layout.hpp"

namespace pni {

struct QaPair {
  std::string question;
  std::string answer;

  friend bool operator==(const QaPair&, const QaPair&) = default;
};

struct InContextExample {
  std::string layout_text;         // canonical
  std::string instruction_text;    // serialized instruction
  std::vector<QaPair> chain_of_thought;
  std::string output_layout_text;  // canonical

  friend bool operator==(const InContextExample&, const InContextExample&) = default;
};

/// Caption-to-layout pair for building a session from a text prompt.
struct SceneExample {
  std::string caption;
  std::string layout_text;  // canonical

  friend bool operator==(const SceneExample&, const SceneExample&) = default;
};

struct ExampleCorpus {
  std::string version;
  std::vector<InContextExample> examples;
  std::vector<SceneExample> scene_examples;
};

inline constexpr std::size_t kMinCorpusExamples = 10;
inline constexpr std::size_t kMaxCorpusExamples = 30;
inline constexpr std::size_t kDefaultPromptExamples = 15;

/// Fixed framing strings. Changing any of them changes every prompt.
inline constexpr std::string_view kInputLayoutLabel = "INPUT LAYOUT:";
inline constexpr std::string_view kInstructionLabel = "INSTRUCTION:";
inline constexpr std::string_view kSceneLabel = "SCENE:";
inline constexpr std::string_view kCanvasLabel = "CANVAS:";
inline constexpr std::string_view kQuestionPrefix = "Q: ";
inline constexpr std::string_view kAnswerPrefix = "A: ";

std::string_view edit_system_text();
std::string_view scene_system_text();

/// Accepts `{"version", "examples": [...], "scene_examples": [...]}` or a
/// bare array of examples. Throws kCorpus naming the offending example.
ExampleCorpus parse_corpus(std::string_view text);
ExampleCorpus load_corpus(const std::filesystem::path& path);

/// min(15, |corpus|).
std::size_t default_prompt_examples(const ExampleCorpus& corpus);

enum class Role { kUser, kAssistant };

std::string_view role_name(Role role);

struct Turn {
  Role role = Role::kUser;
  std::string content;

  friend bool operator==(const Turn&, const Turn&) = default;
};

struct PromptBundle {
  std::string system_text;
  std::vector<Turn> turns;

  /// Total bytes of system text and turn contents.
  std::size_t size() const;

  friend bool operator==(const PromptBundle&, const PromptBundle&) = default;
};

std::string format_edit_request(std::string_view layout_text, std::string_view instruction_text);
std::string format_edit_answer(const std::vector<QaPair>& chain_of_thought,
                               std::string_view layout_text);

/// Throws kInvalidArgument unless 1 <= k <= |corpus.examples|.
PromptBundle build_prompt(const ExampleCorpus& corpus, const Layout& layout,
                          const MultimodalInstruction& instruction, std::size_t k);

/// Text-to-layout prompt over the corpus' scene examples.
PromptBundle build_scene_prompt(const ExampleCorpus& corpus, std::string_view caption,
                                const Canvas& canvas);

/// Appends the rejected completion and a user turn listing `failures`.
PromptBundle with_correction(PromptBundle prompt, std::string_view rejected_completion,
                             const std::vector<std::string>& failures);

struct ParsedCompletion {
  std::vector<QaPair> chain_of_thought;
  Layout layout;
};

/// `Q: `/`A: ` line pairs before the layout block. Lines that are neither
/// are skipped; a question without an answer is dropped.
std::vector<QaPair> parse_chain_of_thought(std::string_view completion);

/// Throws kNoLayoutFound or the layout parse error.
ParsedCompletion parse_completion(std::string_view completion);

}  // namespace pni
