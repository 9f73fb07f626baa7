// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#include "pni/engine.hpp"

#include <chrono>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <spdlog/spdlog.h>

#include "pni/error.hpp"
#include "pni/layout_text.hpp"
#include "pni/oracle.hpp"

namespace pni {

std::string_view engine_kind_name(EngineKind kind) {
  return kind == EngineKind::kOracle ? "oracle" : "llm";
}

std::optional<EngineKind> parse_engine_kind(std::string_view name) {
  if (name == "oracle") return EngineKind::kOracle;
  if (name == "llm") return EngineKind::kLlm;
  return std::nullopt;
}

std::optional<EngineChoice> parse_engine_choice(std::string_view name) {
  if (name == "auto") return EngineChoice::kAuto;
  if (name == "oracle") return EngineChoice::kOracle;
  if (name == "llm") return EngineChoice::kLlm;
  return std::nullopt;
}

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_ms(Clock::time_point since) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - since).count();
}

// One LLM answer after parsing, clamping and validation.
struct Attempt {
  std::string completion;
  std::optional<Layout> layout;
  ValidationReport report;
  std::vector<std::string> failures;
  std::optional<Error> error;

  bool retryable() const {
    if (!layout) return true;
    for (const auto& c : report.checks) {
      if (!c.passed && is_structural_rule(c.rule_id)) return true;
    }
    return false;
  }
};

template <typename Validate>
Attempt evaluate(std::string completion, const ValidationOptions& options, Validate validate) {
  Attempt a;
  a.completion = std::move(completion);
  try {
    Layout raw = parse_completion(a.completion).layout;
    ClampResult clamped = clamp_layout(raw);
    const bool clamp = options.clamp_policy && clamped.oversize.empty() && !clamped.clamped.empty();
    a.layout = clamp ? std::move(clamped.layout) : std::move(raw);
    a.report = validate(*a.layout);
    if (clamp) {
      for (auto& c : a.report.checks) {
        if (c.rule_id != kRuleInCanvas) continue;
        std::string note;
        for (ObjectId id : clamped.clamped) {
          note += fmt::format("{}clamped object {}", note.empty() ? "" : "; ", id);
        }
        c.detail = note;
      }
    }
    for (const auto& c : a.report.checks) {
      if (!c.passed) a.failures.push_back(fmt::format("rule {} failed: {}", c.rule_id, c.detail));
    }
  } catch (const Error& e) {
    a.error = e;
    a.failures.push_back(e.detail().empty() || e.code() == ErrorCode::kNoLayoutFound
                             ? std::string(e.what())
                             : fmt::format("{} ({})", e.what(), e.detail()));
  }
  return a;
}

// Runs the prompt, retrying once with a corrective turn when the first
// answer is unusable. Returns the better attempt and the number of calls.
template <typename Validate>
std::pair<Attempt, int> run_with_retry(LlmBackend& llm, const PromptBundle& prompt,
                                       const ValidationOptions& options, Validate validate) {
  Attempt first = evaluate(llm.complete(prompt), options, validate);
  if (!first.retryable()) return {std::move(first), 1};
  spdlog::info("llm answer rejected ({}); retrying once", fmt::join(first.failures, "; "));
  Attempt second =
      evaluate(llm.complete(with_correction(prompt, first.completion, first.failures)), options,
               validate);
  if (!second.layout && !first.layout) throw *second.error;
  if (!second.layout) return {std::move(first), 2};
  if (!first.layout) return {std::move(second), 2};
  // Both parsed: keep the one with fewer failed checks, preferring the retry.
  if (first.report.failure_count() < second.report.failure_count()) return {std::move(first), 2};
  return {std::move(second), 2};
}

}  // namespace

EditEngine::EditEngine(std::shared_ptr<const ExampleCorpus> corpus,
                       std::shared_ptr<LlmBackend> llm, EngineOptions options)
    : corpus_(std::move(corpus)), llm_(std::move(llm)), options_(options) {
  if (!corpus_) throw Error(ErrorCode::kConfig, "engine needs an example corpus");
  k_ = options_.k.value_or(default_prompt_examples(*corpus_));
  if (k_ < 1 || k_ > corpus_->examples.size()) {
    throw Error(ErrorCode::kConfig, fmt::format("prompting.k must be between 1 and {}, got {}",
                                                corpus_->examples.size(), k_));
  }
}

LlmBackend& EditEngine::llm() const {
  if (!llm_) throw Error(ErrorCode::kLlmUnavailable, "llm unavailable", "no llm configured");
  return *llm_;
}

EditRecord EditEngine::apply(const Layout& before, const MultimodalInstruction& instruction,
                             EngineChoice choice) const {
  check_instruction(instruction);
  switch (choice) {
    case EngineChoice::kOracle:
      return apply_oracle(before, instruction);
    case EngineChoice::kLlm:
      return apply_llm(before, instruction);
    case EngineChoice::kAuto:
      break;
  }
  if (try_parse_command(instruction)) return apply_oracle(before, instruction);
  return apply_llm(before, instruction);
}

EditRecord EditEngine::apply_oracle(const Layout& before,
                                    const MultimodalInstruction& instruction) const {
  const auto started = Clock::now();
  EditRecord record;
  record.instruction = instruction;
  record.engine = EngineKind::kOracle;
  record.before = before;
  record.after = apply_command(before, parse_command(instruction));
  record.validation = validate_edit(before, record.after, instruction, options_.validation);
  record.applied = true;
  record.duration_ms = elapsed_ms(started);
  return record;
}

EditRecord EditEngine::apply_llm(const Layout& before,
                                 const MultimodalInstruction& instruction) const {
  const auto started = Clock::now();
  LlmBackend& backend = llm();
  const PromptBundle prompt = build_prompt(*corpus_, before, instruction, k_);
  auto validate = [&](const Layout& after) {
    return validate_edit(before, after, instruction, options_.validation);
  };
  auto [attempt, calls] = run_with_retry(backend, prompt, options_.validation, validate);

  EditRecord record;
  record.instruction = instruction;
  record.engine = EngineKind::kLlm;
  record.before = before;
  record.after = std::move(*attempt.layout);
  record.completion_text = std::move(attempt.completion);
  record.validation = std::move(attempt.report);
  record.attempts = calls;
  record.applied = record.validation.ok;
  record.duration_ms = elapsed_ms(started);
  return record;
}

Layout EditEngine::create_from_prompt(std::string_view caption, const Canvas& canvas) const {
  LlmBackend& backend = llm();
  const PromptBundle prompt = build_scene_prompt(*corpus_, caption, canvas);
  auto validate = [&](const Layout& drafted) {
    ValidationReport report = validate_structure(drafted, options_.validation);
    const bool same = drafted.canvas == canvas;
    report.add(std::string(kRuleCanvasFixed), same,
               same ? "" : fmt::format("canvas {}x{}, requested {}x{}", drafted.canvas.width,
                                       drafted.canvas.height, canvas.width, canvas.height));
    return report;
  };
  auto [attempt, calls] = run_with_retry(backend, prompt, options_.validation, validate);
  if (!attempt.report.ok) {
    throw Error(ErrorCode::kInvariant, "drafted layout failed validation",
                fmt::format("{}", fmt::join(attempt.failures, "; ")));
  }
  spdlog::info("drafted layout with {} objects in {} call(s)", attempt.layout->objects.size(), calls);
  return std::move(*attempt.layout);
}

}  // namespace pni
