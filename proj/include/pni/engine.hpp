// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "pni/instruction.hpp"
#include "pni/layout.hpp"
#include "pni/llm.hpp"
#include "pni/prompt.hpp"
#include "pni/validator.hpp"

namespace pni {

enum class EngineKind { kOracle, kLlm };
enum class EngineChoice { kAuto, kOracle, kLlm };

std::string_view engine_kind_name(EngineKind kind);
std::optional<EngineKind> parse_engine_kind(std::string_view name);
std::optional<EngineChoice> parse_engine_choice(std::string_view name);

struct EditRecord {
  MultimodalInstruction instruction;
  EngineKind engine = EngineKind::kOracle;
  Layout before;
  Layout after;
  /// Completion the kept layout came from; empty for the oracle.
  std::string completion_text;
  ValidationReport validation;
  std::int64_t duration_ms = 0;
  /// LLM calls made, including the corrective retry.
  int attempts = 0;
  /// True when `after` should become the session's current layout.
  bool applied = false;
};

struct EngineOptions {
  /// Unset means min(15, |corpus|).
  std::optional<std::size_t> k;
  ValidationOptions validation;
};

/// Runs one instruction against a layout. Shared by the CLI and the service
/// so both produce identical results for identical inputs.
class EditEngine {
 public:
  /// `llm` may be null; the LLM path then fails with kLlmUnavailable.
  EditEngine(std::shared_ptr<const ExampleCorpus> corpus, std::shared_ptr<LlmBackend> llm,
             EngineOptions options = {});

  /// auto: the interpreter when the instruction is in its language, else
  /// the LLM. LLM output that fails to parse or fails a structural rule is
  /// retried once with a corrective turn; the better attempt is kept.
  /// Throws when no attempt produced a layout.
  EditRecord apply(const Layout& before, const MultimodalInstruction& instruction,
                   EngineChoice choice = EngineChoice::kAuto) const;

  /// Drafts a layout for a scene caption through the LLM. The result must
  /// pass validate_structure; otherwise throws kInvariant.
  Layout create_from_prompt(std::string_view caption, const Canvas& canvas) const;

  bool has_llm() const { return llm_ != nullptr; }
  std::size_t prompt_examples() const { return k_; }
  const EngineOptions& options() const { return options_; }

 private:
  EditRecord apply_oracle(const Layout& before, const MultimodalInstruction& instruction) const;
  EditRecord apply_llm(const Layout& before, const MultimodalInstruction& instruction) const;
  LlmBackend& llm() const;

  std::shared_ptr<const ExampleCorpus> corpus_;
  std::shared_ptr<LlmBackend> llm_;
  EngineOptions options_;
  std::size_t k_;
};

}  // namespace pni
